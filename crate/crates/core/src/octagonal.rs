//! Generalized octagonal numbers `P8(x) = 3x^2 - 2x` (x over all of Z) and
//! their weighted sums.
//!
//! Every search in this module visits arguments in the order
//! `0, 1, -1, 2, -2, ...`, which is also the order of strictly increasing
//! `P8` values. The first witness found is therefore the lexicographically
//! smallest one under `(|x_1|, x_1 < 0, |x_2|, ...)`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, signed_candidate};
use crate::error::{Error, Result};
use crate::qform::{DiagonalForm, RepProblem, ResidueConstraint};

/// Arguments of `p8` must satisfy `|x| < MAX_ARG`.
pub const MAX_ARG: i64 = 1 << 30;
/// Largest target accepted by the representation searches.
pub const MAX_TARGET: i64 = 1 << 40;
/// Largest single coefficient accepted in a sum.
pub const MAX_COEFF: i64 = 1 << 20;

pub fn p8(x: i64) -> Result<i64> {
    if x.unsigned_abs() >= MAX_ARG as u64 {
        return Err(Error::Overflow(format!(
            "P8 argument {x} outside |x| < 2^30"
        )));
    }
    Ok(p8_raw(x))
}

#[inline]
pub(crate) fn p8_raw(x: i64) -> i64 {
    3 * x * x - 2 * x
}

/// All generalized octagonal numbers in `[0, bound]`, strictly increasing.
pub fn oct_values_up_to(bound: i64) -> Vec<i64> {
    (0u64..)
        .map(|k| p8_raw(signed_candidate(k)))
        .take_while(|&v| v <= bound)
        .collect()
}

/// The unique `x` with `P8(x) = n`, if any. `P8` is injective on Z because
/// `3x - 1` is always `2 mod 3`.
pub fn octagonal_root(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let s = exact_sqrt(n.checked_mul(3)?.checked_add(1)?)?;
    match s % 3 {
        2 => Some((s + 1) / 3),
        1 => Some((1 - s) / 3),
        _ => None,
    }
}

/// Membership in the value set of `P8`, via `3 P8(x) + 1 = (3x - 1)^2`.
pub fn is_gen_octagonal(n: i64) -> bool {
    octagonal_root(n).is_some()
}

/// A weighted sum `a_1 P8(x_1) + ... + a_k P8(x_k)` with the coefficient
/// multiset kept in non-decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct OctSum {
    coeffs: Vec<i64>,
}

impl OctSum {
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self> {
        if let Some(&bad) = coeffs.iter().find(|&&a| !(1..=MAX_COEFF).contains(&a)) {
            return Err(Error::InvalidCoefficient(bad));
        }
        coeffs.sort_unstable();
        Ok(Self { coeffs })
    }

    /// The empty sum; it represents only 0.
    pub fn empty() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn last(&self) -> Option<i64> {
        self.coeffs.last().copied()
    }

    pub fn coeff_sum(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// The sum with one more coefficient, re-canonicalized.
    pub fn with_coeff(&self, c: i64) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn value(&self, xs: &[i64]) -> Result<i64> {
        if xs.len() != self.coeffs.len() {
            return Err(Error::InvalidArgument(format!(
                "witness arity {} does not match sum arity {}",
                xs.len(),
                self.coeffs.len()
            )));
        }
        self.coeffs.iter().zip(xs).try_fold(0i64, |acc, (&a, &x)| {
            a.checked_mul(p8(x)?)
                .and_then(|t| acc.checked_add(t))
                .ok_or_else(|| Error::Overflow("witness value".into()))
        })
    }
}

impl TryFrom<Vec<i64>> for OctSum {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<OctSum> for Vec<i64> {
    fn from(s: OctSum) -> Self {
        s.coeffs
    }
}

impl fmt::Display for OctSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for OctSum {
    type Err = Error;

    /// Parses a comma-separated coefficient list such as `1,2,3,7`.
    /// An empty string is the empty sum.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let coeffs = s
            .split(',')
            .map(|p| {
                p.trim().parse::<i64>().map_err(|_| {
                    Error::InvalidArgument(format!("malformed coefficient `{}`", p.trim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

/// Arguments `x_i` certifying `sum(a_i P8(x_i)) = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OctWitness {
    pub xs: Vec<i64>,
}

impl OctWitness {
    pub fn certifies(&self, sum: &OctSum, n: i64) -> bool {
        sum.value(&self.xs).is_ok_and(|v| v == n)
    }
}

fn check_target(sum: &OctSum, n: i64) -> Result<()> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("target {n} is negative")));
    }
    if n > MAX_TARGET {
        return Err(Error::Overflow(format!("target {n} exceeds 2^40")));
    }
    // The reduced target 3n + sum(a) must stay exact as well.
    n.checked_mul(3)
        .and_then(|t| t.checked_add(sum.coeff_sum()))
        .map(|_| ())
        .ok_or_else(|| Error::Overflow(format!("reduced target for {n}")))
}

/// The quadratic-form image of `sum(a_i P8(x_i)) = n`: with `y_i = 3x_i - 1`
/// it reads `sum(a_i y_i^2) = 3n + sum(a_i)` with every `y_i` nonzero mod 3.
pub fn reduce_to_qform(sum: &OctSum, n: i64) -> Result<RepProblem> {
    if sum.is_empty() {
        return Err(Error::EmptySum);
    }
    check_target(sum, n)?;
    let form = DiagonalForm::new(sum.coeffs().to_vec())?;
    let target = 3 * n + sum.coeff_sum();
    let constraint = ResidueConstraint::nonzero_mod3(sum.len());
    RepProblem::new(form, target, constraint)
}

/// Maps a form-level witness of [`reduce_to_qform`] back to octagonal
/// arguments: `y = 3x - 1` or `y = -(3x - 1)`.
pub fn lift_form_witness(ys: &[i64]) -> Option<OctWitness> {
    ys.iter()
        .map(|&y| match y.rem_euclid(3) {
            2 => Some((y + 1) / 3),
            1 => Some((1 - y) / 3),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()
        .map(|xs| OctWitness { xs })
}

fn search(coeffs: &[i64], rem: i64, xs: &mut Vec<i64>) -> bool {
    let Some((&a, rest)) = coeffs.split_first() else {
        return rem == 0;
    };
    if rest.is_empty() {
        if rem % a != 0 {
            return false;
        }
        return match octagonal_root(rem / a) {
            Some(x) => {
                xs.push(x);
                true
            }
            None => false,
        };
    }
    for k in 0u64.. {
        let x = signed_candidate(k);
        let v = a * p8_raw(x);
        if v > rem {
            break;
        }
        xs.push(x);
        if search(rest, rem - v, xs) {
            return true;
        }
        xs.pop();
    }
    false
}

/// Smallest witness (in the crate-wide order) for `n`, or `None`.
pub fn represents(sum: &OctSum, n: i64) -> Result<Option<OctWitness>> {
    check_target(sum, n)?;
    let mut xs = Vec::with_capacity(sum.len());
    if !search(sum.coeffs(), n, &mut xs) {
        return Ok(None);
    }
    let w = OctWitness { xs };
    assert!(w.certifies(sum, n), "search returned an invalid witness");
    Ok(Some(w))
}

/// Bitset of the integers in `[0, bound]` represented by a sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationTable {
    bound: i64,
    words: Vec<u64>,
}

const PAR_WORDS: usize = 1 << 12;

impl RepresentationTable {
    pub fn build(sum: &OctSum, bound: i64) -> Result<Self> {
        check_target(sum, bound)?;
        let nwords = (bound as usize) / 64 + 1;
        let mut words = vec![0u64; nwords];
        words[0] = 1;
        for &a in sum.coeffs() {
            let shifts: Vec<usize> = oct_values_up_to(bound / a)
                .into_iter()
                .map(|v| (a * v) as usize)
                .collect();
            let src = words;
            let mut dst = vec![0u64; nwords];
            let fill = |(ci, chunk): (usize, &mut [u64])| {
                for (off, slot) in chunk.iter_mut().enumerate() {
                    let w = ci * PAR_WORDS + off;
                    let mut acc = 0u64;
                    for &s in &shifts {
                        acc |= shifted_word(&src, w, s);
                    }
                    *slot = acc;
                }
            };
            if nwords > PAR_WORDS {
                dst.par_chunks_mut(PAR_WORDS).enumerate().for_each(fill);
            } else {
                dst.chunks_mut(PAR_WORDS).enumerate().for_each(fill);
            }
            words = dst;
        }
        let tail = (bound as usize % 64) + 1;
        if tail < 64 {
            *words.last_mut().unwrap() &= (1u64 << tail) - 1;
        }
        Ok(Self { bound, words })
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn contains(&self, n: i64) -> bool {
        (0..=self.bound).contains(&n) && (self.words[n as usize / 64] >> (n as usize % 64)) & 1 == 1
    }

    /// Positive integers in `[1, bound]` that are not represented.
    pub fn missing(&self) -> impl Iterator<Item = i64> + '_ {
        (1..=self.bound).filter(move |&n| !self.contains(n))
    }
}

/// Word `w` of `src` shifted left by `s` bits.
#[inline]
fn shifted_word(src: &[u64], w: usize, s: usize) -> u64 {
    let (ws, bs) = (s / 64, s % 64);
    if w < ws {
        return 0;
    }
    let lo = src[w - ws] << bs;
    if bs > 0 && w > ws {
        lo | (src[w - ws - 1] >> (64 - bs))
    } else {
        lo
    }
}

/// Every `n` in `[1, bound]` not represented by `sum`, ascending.
pub fn exceptions_up_to(sum: &OctSum, bound: i64) -> Result<Vec<i64>> {
    Ok(RepresentationTable::build(sum, bound.max(0))?
        .missing()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum(c: &[i64]) -> OctSum {
        OctSum::new(c.to_vec()).unwrap()
    }

    #[test]
    fn p8_examples() {
        assert_eq!(p8(0).unwrap(), 0);
        assert_eq!(p8(2).unwrap(), 8);
        assert_eq!(p8(-1).unwrap(), 5);
        assert!(matches!(p8(MAX_ARG), Err(Error::Overflow(_))));
        assert!(matches!(p8(-MAX_ARG), Err(Error::Overflow(_))));
        assert!(p8(MAX_ARG - 1).is_ok());
    }

    #[test]
    fn identity_with_shifted_square() {
        for x in -10_000i64..=10_000 {
            assert_eq!(3 * p8(x).unwrap() + 1, (3 * x - 1) * (3 * x - 1));
        }
    }

    #[test]
    fn small_value_lists() {
        assert_eq!(oct_values_up_to(21), vec![0, 1, 5, 8, 16, 21]);
        assert_eq!(oct_values_up_to(0), vec![0]);
        assert!(oct_values_up_to(-1).is_empty());
    }

    #[test]
    fn value_list_against_direct_enumeration() {
        // |x| <= 58 covers every x with P8(x) <= 10^4.
        let mut direct: Vec<i64> = (-58i64..=58)
            .map(|x| 3 * x * x - 2 * x)
            .filter(|&v| v <= 10_000)
            .collect();
        direct.sort_unstable();
        direct.dedup();
        let vals = oct_values_up_to(10_000);
        assert_eq!(vals, direct);
        assert_eq!(vals.len(), 116);
    }

    #[test]
    fn membership_examples() {
        assert!(is_gen_octagonal(5));
        assert!(!is_gen_octagonal(2));
        assert!(is_gen_octagonal(40));
        assert!(is_gen_octagonal(0));
        assert!(!is_gen_octagonal(-3));
        assert_eq!(octagonal_root(40), Some(4));
        assert_eq!(octagonal_root(5), Some(-1));
    }

    #[test]
    fn reduction_examples() {
        let p = reduce_to_qform(&sum(&[1, 1, 3, 3]), 7).unwrap();
        assert_eq!(p.target(), 3 * 7 + 8);
        assert_eq!(p.form().coeffs(), &[1, 1, 3, 3]);
        let p = reduce_to_qform(&sum(&[1, 2, 3, 7]), 4).unwrap();
        assert_eq!(p.target(), 3 * 4 + 13);
        let p = reduce_to_qform(&sum(&[1]), 0).unwrap();
        assert_eq!(p.target(), 1);
        assert!(
            p.constraint().allows(0, 1)
                && p.constraint().allows(0, 2)
                && !p.constraint().allows(0, 0)
        );
        assert_eq!(reduce_to_qform(&OctSum::empty(), 3), Err(Error::EmptySum));
    }

    #[test]
    fn represents_examples() {
        assert_eq!(represents(&sum(&[1, 1, 3, 7]), 14).unwrap(), None);
        assert_eq!(represents(&sum(&[1, 1, 2, 14]), 60).unwrap(), None);
        assert_eq!(
            represents(&sum(&[1]), 5).unwrap(),
            Some(OctWitness { xs: vec![-1] })
        );
        assert_eq!(
            represents(&OctSum::empty(), 0).unwrap(),
            Some(OctWitness { xs: vec![] })
        );
        assert_eq!(represents(&OctSum::empty(), 1).unwrap(), None);
        assert!(matches!(
            represents(&sum(&[1]), MAX_TARGET + 1),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn witness_is_lexicographically_smallest() {
        // Oracle: enumerate every witness with small arguments and take the
        // minimum under the (|x|, sign) key.
        let s = sum(&[1, 2, 3]);
        for n in 0..200 {
            let mut best: Option<Vec<i64>> = None;
            for x in -10i64..=10 {
                for y in -10i64..=10 {
                    for z in -10i64..=10 {
                        if p8_raw(x) + 2 * p8_raw(y) + 3 * p8_raw(z) == n {
                            let cand = vec![x, y, z];
                            let key = |v: &Vec<i64>| {
                                v.iter()
                                    .map(|&t| crate::arith::signed_key(t))
                                    .collect::<Vec<_>>()
                            };
                            if best.as_ref().is_none_or(|b| key(&cand) < key(b)) {
                                best = Some(cand);
                            }
                        }
                    }
                }
            }
            assert_eq!(represents(&s, n).unwrap().map(|w| w.xs), best, "n = {n}");
        }
    }

    #[test]
    fn lift_round_trip() {
        for x in -50i64..=50 {
            assert_eq!(lift_form_witness(&[3 * x - 1]).unwrap().xs, vec![x]);
            assert_eq!(lift_form_witness(&[1 - 3 * x]).unwrap().xs, vec![x]);
        }
        assert!(lift_form_witness(&[3]).is_none());
    }

    #[test]
    fn table_matches_search() {
        let s = sum(&[1, 2, 4]);
        let t = RepresentationTable::build(&s, 3000).unwrap();
        for n in 0..=3000 {
            assert_eq!(
                t.contains(n),
                represents(&s, n).unwrap().is_some(),
                "n = {n}"
            );
        }
        assert!(!t.contains(3001));
    }

    #[test]
    fn canonical_order_and_parsing() {
        let s: OctSum = "3, 1,1,3".parse().unwrap();
        assert_eq!(s.coeffs(), &[1, 1, 3, 3]);
        assert_eq!(s.to_string(), "(1,1,3,3)");
        assert!("1,0".parse::<OctSum>().is_err());
        assert!("1,x".parse::<OctSum>().is_err());
        assert!("".parse::<OctSum>().unwrap().is_empty());
    }

    #[test]
    fn exceptional_sets_at_ten_thousand() {
        assert_eq!(
            exceptions_up_to(&sum(&[1, 1, 2, 14]), 10_000).unwrap(),
            vec![60]
        );
        assert_eq!(
            exceptions_up_to(&sum(&[1, 1, 3, 4]), 10_000).unwrap(),
            vec![18]
        );
        assert_eq!(
            exceptions_up_to(&sum(&[1, 2, 3, 3]), 10_000).unwrap(),
            vec![12]
        );
    }
}
