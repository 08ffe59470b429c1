//! Identifiers for the universality results that have a verification
//! pipeline, with the sum each one concerns.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::octagonal::OctSum;

/// Coefficients `alpha` of the quinary sums `(1,1,3,7,alpha)` handled by the
/// shared pinned-pair pipeline.
pub const QUINARY_ALPHAS: [i64; 6] = [7, 9, 10, 11, 13, 14];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TheoremId {
    T21,
    T22,
    T23,
    T24a,
    T24b,
    L32,
    L33,
    L34,
    L35(i64),
    L36,
    L37,
    T31,
}

impl TheoremId {
    pub fn all() -> Vec<TheoremId> {
        let mut ids = vec![
            Self::T21,
            Self::T22,
            Self::T23,
            Self::T24a,
            Self::T24b,
            Self::L32,
            Self::L33,
            Self::L34,
        ];
        ids.extend(QUINARY_ALPHAS.iter().map(|&a| Self::L35(a)));
        ids.extend([Self::L36, Self::L37, Self::T31]);
        ids
    }

    /// Coefficients of the sum the result is about; `None` for the
    /// criterion theorem.
    pub fn coeffs(self) -> Option<Vec<i64>> {
        Some(match self {
            Self::T21 => vec![1, 1, 3, 3],
            Self::T22 => vec![1, 1, 3, 6],
            Self::T23 => vec![1, 2, 3, 6],
            Self::T24a => vec![1, 2, 3, 7],
            Self::T24b => vec![1, 2, 3, 9],
            Self::L32 => vec![1, 1, 2, 14],
            Self::L33 => vec![1, 1, 3, 4],
            Self::L34 => vec![1, 2, 3, 3],
            Self::L35(a) => vec![1, 1, 3, 7, a],
            Self::L36 => vec![1, 1, 3, 7, 8],
            Self::L37 => vec![1, 1, 3, 7, 12],
            Self::T31 => return None,
        })
    }

    pub fn sum(self) -> Option<OctSum> {
        self.coeffs()
            .map(|c| OctSum::new(c).expect("static coefficients are positive"))
    }

    /// The positive integers the sum is claimed to miss.
    pub fn exceptions(self) -> &'static [i64] {
        match self {
            Self::L32 => &[60],
            Self::L33 => &[18],
            Self::L34 => &[12],
            _ => &[],
        }
    }

    /// The result whose pipeline certifies universality of `coeffs`, if any.
    pub fn for_universal_sum(coeffs: &[i64]) -> Option<TheoremId> {
        Self::all()
            .into_iter()
            .find(|id| id.exceptions().is_empty() && id.coeffs().as_deref() == Some(coeffs))
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::T21 => f.write_str("T2.1"),
            Self::T22 => f.write_str("T2.2"),
            Self::T23 => f.write_str("T2.3"),
            Self::T24a => f.write_str("T2.4a"),
            Self::T24b => f.write_str("T2.4b"),
            Self::L32 => f.write_str("L3.2"),
            Self::L33 => f.write_str("L3.3"),
            Self::L34 => f.write_str("L3.4"),
            Self::L35(a) => write!(f, "L3.5-{a}"),
            Self::L36 => f.write_str("L3.6"),
            Self::L37 => f.write_str("L3.7"),
            Self::T31 => f.write_str("T3.1"),
        }
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    /// Accepts the display form; the quinary family also parses as
    /// `L3.5(7)` or `L3.5a7`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let id = match t {
            "T2.1" => Self::T21,
            "T2.2" => Self::T22,
            "T2.3" => Self::T23,
            "T2.4a" => Self::T24a,
            "T2.4b" => Self::T24b,
            "L3.2" => Self::L32,
            "L3.3" => Self::L33,
            "L3.4" => Self::L34,
            "L3.6" => Self::L36,
            "L3.7" => Self::L37,
            "T3.1" => Self::T31,
            _ => {
                let alpha = t
                    .strip_prefix("L3.5")
                    .map(|r| r.trim_start_matches(['-', '(', 'a']).trim_end_matches(')'))
                    .and_then(|r| r.parse::<i64>().ok())
                    .filter(|a| QUINARY_ALPHAS.contains(a))
                    .ok_or_else(|| Error::UnknownTheorem(t.to_string()))?;
                Self::L35(alpha)
            }
        };
        Ok(id)
    }
}

impl From<TheoremId> for String {
    fn from(id: TheoremId) -> String {
        id.to_string()
    }
}

impl TryFrom<String> for TheoremId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_ids_round_trip() {
        let ids = TheoremId::all();
        assert_eq!(ids.len(), 17);
        for id in ids {
            assert_eq!(id.to_string().parse::<TheoremId>().unwrap(), id);
        }
        assert_eq!("L3.5(9)".parse::<TheoremId>().unwrap(), TheoremId::L35(9));
        assert!("L3.5-8".parse::<TheoremId>().is_err());
        assert!("T9.9".parse::<TheoremId>().is_err());
    }
}
