//! Bounded verification of each universality result through the same
//! intermediate claims its proof uses, with deterministic certificates.

mod cache;
mod certificate;
mod pipelines;

pub use cache::{CacheStats, ResultCache};
pub use certificate::{CertVerdict, Certificate, SampleWitness, SCHEMA_VERSION};
pub use pipelines::{
    small_case_threshold, verify_all, verify_all_with, verify_theorem, verify_theorem_with,
};
