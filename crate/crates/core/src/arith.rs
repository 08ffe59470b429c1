//! Exact integer helpers shared by the search kernels.

/// Floor square root of a non-negative integer.
#[inline]
pub fn isqrt(n: i64) -> i64 {
    debug_assert!(n >= 0);
    (n as u64).isqrt() as i64
}

/// Returns `Some(r)` with `r >= 0` and `r * r == n` when `n` is a perfect square.
#[inline]
pub fn exact_sqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

#[inline]
pub fn is_square(n: i64) -> bool {
    exact_sqrt(n).is_some()
}

/// Divisible by 3.
#[inline]
pub fn div3(x: i64) -> bool {
    x % 3 == 0
}

/// The k-th integer in the order 0, 1, -1, 2, -2, ... used for every
/// deterministic tie-break in the crate.
#[inline]
pub fn signed_candidate(k: u64) -> i64 {
    if k == 0 {
        0
    } else if k % 2 == 1 {
        k.div_ceil(2) as i64
    } else {
        -((k / 2) as i64)
    }
}

/// Sort key realizing the same order: by absolute value, positive first.
#[cfg(test)]
pub fn signed_key(x: i64) -> (u64, bool) {
    (x.unsigned_abs(), x < 0)
}
