//! Truants, the escalation tree over canonical coefficient vectors, and the
//! twelve-integer universality criterion.
//!
//! A node whose sum has a truant `t` branches into every sum obtained by
//! appending a coefficient `c` with `last <= c <= t`; nodes with no truant up
//! to the search bound are leaves marked bounded-universal. Nothing here
//! claims universality beyond the bound; nodes whose universality is
//! certified by a dedicated pipeline carry that provenance.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::octagonal::{exceptions_up_to, represents, OctSum, RepresentationTable};
use crate::theorem::TheoremId;

/// Default truant search bound.
pub const DEFAULT_BOUND: i64 = 10_000;

/// A sum represents every non-negative integer iff it represents these.
pub const CRITERION_SET: [i64; 12] = [1, 2, 3, 4, 6, 7, 9, 12, 13, 14, 18, 60];

/// The quaternary sums `(1, b, c, d)` that are universal.
pub const UNIVERSAL_QUATERNARY: [[i64; 4]; 40] = [
    [1, 1, 1, 1],
    [1, 1, 1, 2],
    [1, 1, 1, 3],
    [1, 1, 1, 4],
    [1, 1, 2, 2],
    [1, 1, 2, 3],
    [1, 1, 2, 4],
    [1, 1, 2, 5],
    [1, 1, 2, 6],
    [1, 1, 2, 7],
    [1, 1, 2, 8],
    [1, 1, 2, 9],
    [1, 1, 2, 10],
    [1, 1, 2, 11],
    [1, 1, 2, 12],
    [1, 1, 2, 13],
    [1, 1, 3, 3],
    [1, 1, 3, 5],
    [1, 1, 3, 6],
    [1, 2, 2, 2],
    [1, 2, 2, 3],
    [1, 2, 2, 4],
    [1, 2, 2, 5],
    [1, 2, 2, 6],
    [1, 2, 3, 4],
    [1, 2, 3, 5],
    [1, 2, 3, 6],
    [1, 2, 3, 7],
    [1, 2, 3, 8],
    [1, 2, 3, 9],
    [1, 2, 4, 4],
    [1, 2, 4, 5],
    [1, 2, 4, 6],
    [1, 2, 4, 7],
    [1, 2, 4, 8],
    [1, 2, 4, 9],
    [1, 2, 4, 10],
    [1, 2, 4, 11],
    [1, 2, 4, 12],
    [1, 2, 4, 13],
];

/// Smallest `n` in `[1, bound]` not represented by `sum`.
pub fn truant(sum: &OctSum, bound: i64) -> Result<Option<i64>> {
    if bound < 1 {
        return Err(Error::InvalidArgument(format!(
            "truant bound {bound} must be positive"
        )));
    }
    Ok(RepresentationTable::build(sum, bound)?.missing().next())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeStatus {
    Truant,
    BoundedUniversal,
}

/// Where a bounded-universal node's universality comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Provenance {
    /// Universal by an earlier published result; no pipeline here.
    Established,
    /// Certified by the pipeline of the given result.
    Certified(TheoremId),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Established => f.write_str("established"),
            Self::Certified(id) => write!(f, "{id}"),
        }
    }
}

impl From<Provenance> for String {
    fn from(p: Provenance) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Provenance {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        if s == "established" {
            Ok(Self::Established)
        } else {
            Ok(Self::Certified(s.parse()?))
        }
    }
}

/// Provenance for a sum believed universal, if the sum is one of the known
/// ones.
pub fn provenance_of(sum: &OctSum) -> Option<Provenance> {
    let c = sum.coeffs();
    if let Some(id) = TheoremId::for_universal_sum(c) {
        return Some(Provenance::Certified(id));
    }
    if c.len() == 4 && UNIVERSAL_QUATERNARY.iter().any(|q| q == c) {
        return Some(Provenance::Established);
    }
    // A quaternary sum missing exactly one value b becomes universal after
    // appending any coefficient up to b.
    if c.len() == 5 {
        for id in [TheoremId::L32, TheoremId::L33, TheoremId::L34] {
            let base = id.coeffs().expect("has a sum");
            if c[..4] == base[..] && c[4] <= id.exceptions()[0] {
                return Some(Provenance::Certified(id));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscalationNode {
    #[serde(rename = "coeffs")]
    pub sum: OctSum,
    pub status: NodeStatus,
    pub truant: Option<i64>,
    pub provenance: Option<Provenance>,
    pub children: Vec<EscalationNode>,
}

impl EscalationNode {
    pub fn depth(&self) -> usize {
        self.sum.len()
    }

    /// Pre-order traversal.
    pub fn walk(&self) -> Vec<&EscalationNode> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.walk());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscalationTree {
    pub max_depth: usize,
    pub bound: i64,
    pub root: EscalationNode,
}

impl EscalationTree {
    pub fn nodes(&self) -> Vec<&EscalationNode> {
        self.root.walk()
    }

    pub fn find(&self, coeffs: &[i64]) -> Option<&EscalationNode> {
        self.nodes().into_iter().find(|n| n.sum.coeffs() == coeffs)
    }

    pub fn at_depth(&self, depth: usize) -> Vec<&EscalationNode> {
        self.nodes()
            .into_iter()
            .filter(|n| n.depth() == depth)
            .collect()
    }

    /// Canonical JSON: children in ascending coefficient order.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn build_node(sum: OctSum, max_depth: usize, bound: i64) -> Result<EscalationNode> {
    let t = truant(&sum, bound)?;
    if let Some(t) = t {
        assert!(
            represents(&sum, t)?.is_none(),
            "truant {t} of {sum} is represented"
        );
    }
    let mut children = Vec::new();
    if let Some(t) = t {
        if sum.len() < max_depth {
            let lo = sum.last().unwrap_or(1);
            children = (lo..=t)
                .into_par_iter()
                .map(|c| build_node(sum.with_coeff(c)?, max_depth, bound))
                .collect::<Result<Vec<_>>>()?;
        }
    }
    let (status, provenance) = match t {
        Some(_) => (NodeStatus::Truant, None),
        None => (NodeStatus::BoundedUniversal, provenance_of(&sum)),
    };
    Ok(EscalationNode {
        sum,
        status,
        truant: t,
        provenance,
        children,
    })
}

/// Escalation tree from the empty sum, with nodes of up to `max_depth`
/// coefficients and truants searched in `[1, bound]`.
pub fn escalate(max_depth: usize, bound: i64) -> Result<EscalationTree> {
    if max_depth < 1 {
        return Err(Error::InvalidArgument(
            "escalation depth must be at least 1".into(),
        ));
    }
    let root = build_node(OctSum::empty(), max_depth, bound)?;
    Ok(EscalationTree {
        max_depth,
        bound,
        root,
    })
}

/// Union of all truants in the tree, without the depth check.
pub fn criterion_set_unchecked(tree: &EscalationTree) -> BTreeSet<i64> {
    tree.nodes().into_iter().filter_map(|n| n.truant).collect()
}

/// Union of all truants; refused for trees too shallow or too narrowly
/// searched to contain every truant.
pub fn criterion_set(tree: &EscalationTree) -> Result<BTreeSet<i64>> {
    if tree.max_depth < 5 || tree.bound < 60 {
        return Err(Error::ShallowTree {
            depth: tree.max_depth,
            bound: tree.bound,
        });
    }
    Ok(criterion_set_unchecked(tree))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    UniversalByCriterion,
    NotUniversal {
        n: i64,
    },
    /// Every criterion integer is represented yet the corroborating scan
    /// found exceptions; the input needs investigation.
    BoundedUniversalUnproven {
        exceptions: Vec<i64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub sum: OctSum,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub checked_bound: i64,
}

pub fn classify(sum: &OctSum, bound: i64) -> Result<ClassificationReport> {
    for &n in &CRITERION_SET {
        if represents(sum, n)?.is_none() {
            return Ok(ClassificationReport {
                sum: sum.clone(),
                verdict: Verdict::NotUniversal { n },
                checked_bound: n,
            });
        }
    }
    let exceptions = exceptions_up_to(sum, bound)?;
    let verdict = if exceptions.is_empty() {
        Verdict::UniversalByCriterion
    } else {
        Verdict::BoundedUniversalUnproven { exceptions }
    };
    Ok(ClassificationReport {
        sum: sum.clone(),
        verdict,
        checked_bound: bound,
    })
}
