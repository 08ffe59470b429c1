use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::theorem::TheoremId;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CertVerdict {
    Pass,
    /// Smallest counterexample and the claim it violates.
    Fail {
        n: i64,
        claim: String,
        detail: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleWitness {
    pub n: i64,
    pub coeffs: Vec<i64>,
    pub xs: Vec<i64>,
}

/// Record of one bounded verification run. The serialized form depends only
/// on `(theorem_id, bound, engine_version)`; wall-clock time is kept out of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub theorem_id: TheoremId,
    pub coeffs: Option<Vec<i64>>,
    pub bound: i64,
    pub small_case_threshold: Option<i64>,
    pub verdict: CertVerdict,
    pub exceptions: Vec<i64>,
    /// How many instances of each intermediate claim were checked.
    pub claims: BTreeMap<String, u64>,
    pub sample_witnesses: Vec<SampleWitness>,
    pub notes: Vec<String>,
    pub engine_version: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == CertVerdict::Pass
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn file_name(&self) -> String {
        format!("{}.json", self.theorem_id)
    }
}
