//! Weighted sums of generalized octagonal numbers `P8(x) = 3x^2 - 2x`:
//! exact representation search, the diagonal quadratic forms they reduce
//! to, residue-repair rewrites, escalation, and bounded verification
//! pipelines with deterministic certificates.

mod arith;
pub mod error;
pub mod escalator;
pub mod octagonal;
pub mod qform;
pub mod repair;
pub mod theorem;
pub mod verify;

pub use error::{Error, Result};
pub use escalator::{
    classify, criterion_set, escalate, truant, ClassificationReport, EscalationNode,
    EscalationTree, NodeStatus, Provenance, Verdict, CRITERION_SET,
};
pub use octagonal::{
    exceptions_up_to, is_gen_octagonal, oct_values_up_to, p8, reduce_to_qform, represents, OctSum,
    OctWitness, RepresentationTable,
};
pub use qform::{
    criterion_represents, excluded_by_rule, represents_unconstrained, solve, solve_all,
    verify_criterion, CatalogForm, DiagonalForm, ExclusionRule, FormWitness, RepProblem,
    ResidueConstraint,
};
pub use repair::{jones_repair, parity_repair, tau_repair, tau_step, TauVector};
pub use theorem::TheoremId;
pub use verify::{verify_all, verify_theorem, Certificate, ResultCache};

/// Recorded in certificates and persisted caches.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
