//! Norm-preserving rewrites that move a representation away from
//! components divisible by 3.

use serde::{Deserialize, Serialize};

use crate::arith::{div3, exact_sqrt, isqrt, signed_candidate};
use crate::error::{Error, Result};
use crate::qform::{solve, DiagonalForm, RepProblem, ResidueConstraint};

/// Default orbit length for [`tau_repair`].
pub const DEFAULT_MAX_ITERS: usize = 64;

/// The binary forms `u^2 + k v^2` the repairs act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinaryForm {
    /// `x^2 + 2y^2`
    Plus2,
    /// `x^2 + 3y^2`
    Plus3,
    /// `x^2 + 8y^2`
    Plus8,
}

impl BinaryForm {
    pub fn weight(self) -> i64 {
        match self {
            Self::Plus2 => 2,
            Self::Plus3 => 3,
            Self::Plus8 => 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryRep {
    pub form: BinaryForm,
    pub u: i64,
    pub v: i64,
}

impl BinaryRep {
    pub fn norm(&self) -> i64 {
        self.u * self.u + self.form.weight() * self.v * self.v
    }

    /// Both components prime to 3.
    pub fn is_clean(&self) -> bool {
        !div3(self.u) && !div3(self.v)
    }
}

/// Finds `(e, f)` with `e^2 + k f^2 = u^2 + k v^2` and `e f` prime to 3.
/// The input is returned unchanged when it already qualifies; otherwise the
/// first qualifying pair in the order `e = 0, 1, -1, ...` (`f >= 0` first).
pub fn binary_repair(form: BinaryForm, u: i64, v: i64) -> Result<Option<BinaryRep>> {
    if u == 0 && v == 0 {
        return Err(Error::ZeroInput);
    }
    let input = BinaryRep { form, u, v };
    if input.is_clean() {
        return Ok(Some(input));
    }
    let k = form.weight();
    let norm = u
        .checked_mul(u)
        .and_then(|uu| v.checked_mul(v)?.checked_mul(k)?.checked_add(uu))
        .filter(|&n| n <= 1 << 60)
        .ok_or_else(|| Error::Overflow("binary repair norm".into()))?;
    let limit = isqrt(norm);
    for j in 0u64.. {
        let e = signed_candidate(j);
        if e.abs() > limit {
            break;
        }
        let rest = norm - e * e;
        if div3(e) || rest % k != 0 {
            continue;
        }
        if let Some(f) = exact_sqrt(rest / k) {
            if !div3(f) {
                let rep = BinaryRep { form, u: e, v: f };
                debug_assert_eq!(rep.norm(), norm);
                return Ok(Some(rep));
            }
        }
    }
    Ok(None)
}

/// The `x^2 + 2y^2` repair: `(e, f)` with the same value and `ef` prime to 3.
pub fn jones_repair(u: i64, v: i64) -> Result<Option<(i64, i64)>> {
    Ok(binary_repair(BinaryForm::Plus2, u, v)?.map(|r| (r.u, r.v)))
}

/// The `x^2 + 8y^2` analogue of [`jones_repair`].
pub fn plus8_repair(u: i64, v: i64) -> Result<Option<(i64, i64)>> {
    Ok(binary_repair(BinaryForm::Plus8, u, v)?.map(|r| (r.u, r.v)))
}

/// `e^2 + 3b^2 = p^2 + 3q^2` with `p = (e + 3b)/2`, `q = (e - b)/2`.
/// When `e` is prime to 3 and `3 | b`, both `p` and `q` are prime to 3.
pub fn parity_repair(e: i64, b: i64) -> Result<(i64, i64)> {
    if (e - b).rem_euclid(2) != 0 {
        return Err(Error::ParityMismatch(e, b));
    }
    let p = (e + 3 * b) / 2;
    let q = (e - b) / 2;
    debug_assert_eq!(p * p + 3 * q * q, e * e + 3 * b * b);
    Ok((p, q))
}

/// A solution `(a, b, d)` of `x^2 + y^2 + 4t^2 = norm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TauVector {
    pub a: i64,
    pub b: i64,
    pub d: i64,
    pub norm: i64,
}

impl TauVector {
    pub fn new(a: i64, b: i64, d: i64) -> Self {
        Self {
            a,
            b,
            d,
            norm: a * a + b * b + 4 * d * d,
        }
    }

    pub fn computed_norm(&self) -> i64 {
        self.a * self.a + self.b * self.b + 4 * self.d * self.d
    }

    fn all_div3(&self) -> bool {
        div3(self.a) && div3(self.b) && div3(self.d)
    }

    pub fn is_clean(&self) -> bool {
        !div3(self.a) && !div3(self.b) && !div3(self.d)
    }
}

/// `(a, b, d) -> (a + 2b + 4d, -2a - b + 4d, -a + b - d) / 3`, an isometry
/// of `<1,1,4>` that is integral on vectors with every entry divisible by 3.
pub fn tau_step(w: TauVector) -> Result<TauVector> {
    if !w.all_div3() {
        return Err(Error::NonIntegralImage(w.a, w.b, w.d));
    }
    let (a, b, d) = (w.a, w.b, w.d);
    let next = TauVector {
        a: (a + 2 * b + 4 * d) / 3,
        b: (-2 * a - b + 4 * d) / 3,
        d: (-a + b - d) / 3,
        norm: w.norm,
    };
    debug_assert_eq!(next.computed_norm(), w.computed_norm());
    Ok(next)
}

/// `t (2, 12, -5) -> t (14, 6, 2)`, two vectors of norm `248 t^2`.
pub fn eigen_escape(w: &TauVector) -> Option<TauVector> {
    if w.a == 0 || w.a % 2 != 0 {
        return None;
    }
    let t = w.a / 2;
    (w.b == 12 * t && w.d == -5 * t).then(|| TauVector {
        a: 14 * t,
        b: 6 * t,
        d: 2 * t,
        norm: w.norm,
    })
}

/// Drives a solution of `x^2 + y^2 + 4t^2 = M` to one with all entries prime
/// to 3: iterate [`tau_step`] while every entry is divisible by 3, escaping
/// the `(2, 12, -5)` direction, and fall back to exhaustive search when the
/// orbit reaches a mixed vector or `max_iters` steps.
pub fn tau_repair(w: TauVector, max_iters: usize) -> Result<Option<TauVector>> {
    let actual = w.computed_norm();
    if actual != w.norm {
        return Err(Error::NormMismatch {
            expected: w.norm,
            actual,
        });
    }
    if w.norm <= 0 {
        return Err(Error::ZeroInput);
    }
    let mut cur = w;
    for _ in 0..max_iters {
        if cur.is_clean() {
            return Ok(Some(cur));
        }
        if let Some(esc) = eigen_escape(&cur) {
            cur = esc;
            continue;
        }
        if !cur.all_div3() {
            break;
        }
        cur = tau_step(cur)?;
    }
    if cur.is_clean() {
        return Ok(Some(cur));
    }
    let form = DiagonalForm::new(vec![1, 1, 4])?;
    let problem = RepProblem::new(form, w.norm, ResidueConstraint::nonzero_mod3(3))?;
    Ok(solve(&problem).map(|s| TauVector {
        a: s.ys[0],
        b: s.ys[1],
        d: s.ys[2],
        norm: w.norm,
    }))
}
