//! One pipeline per result. Above the small-case threshold each `n` is
//! carried through the intermediate claims of the corresponding proof (pick
//! a candidate, represent it by a ternary form, repair residues mod 3) and
//! the resulting vector is lifted back to a witness for the octagonal sum.
//! At or below the threshold the pipeline defers to direct search.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use super::cache::ResultCache;
use super::certificate::{CertVerdict, Certificate, SampleWitness, SCHEMA_VERSION};
use crate::arith::{div3, is_square};
use crate::error::{Error, Result};
use crate::escalator::{criterion_set, escalate, NodeStatus, CRITERION_SET, UNIVERSAL_QUATERNARY};
use crate::octagonal::{lift_form_witness, OctSum, OctWitness, MAX_TARGET};
use crate::qform::{
    criterion_represents, solve, solve_all, DiagonalForm, RepProblem, ResidueConstraint,
};
use crate::repair::{
    jones_repair, parity_repair, plus8_repair, tau_repair, TauVector, DEFAULT_MAX_ITERS,
};
use crate::theorem::TheoremId;
use crate::ENGINE_VERSION;

const SAMPLE_COUNT: i64 = 10;

#[derive(Debug)]
enum StepError {
    Claim { claim: &'static str, detail: String },
    Engine(Error),
}

impl From<Error> for StepError {
    fn from(e: Error) -> Self {
        StepError::Engine(e)
    }
}

type Step<T> = std::result::Result<T, StepError>;

#[derive(Default)]
struct Log(BTreeMap<&'static str, u64>);

impl Log {
    fn hit(&mut self, claim: &'static str) {
        *self.0.entry(claim).or_default() += 1;
    }

    /// Records `claim` and fails with `detail` unless `ok`.
    fn check(
        &mut self,
        ok: bool,
        claim: &'static str,
        detail: impl FnOnce() -> String,
    ) -> Step<()> {
        if ok {
            self.hit(claim);
            Ok(())
        } else {
            Err(StepError::Claim {
                claim,
                detail: detail(),
            })
        }
    }

    fn expect<T>(
        &mut self,
        v: Option<T>,
        claim: &'static str,
        detail: impl FnOnce() -> String,
    ) -> Step<T> {
        match v {
            Some(v) => {
                self.hit(claim);
                Ok(v)
            }
            None => Err(StepError::Claim {
                claim,
                detail: detail(),
            }),
        }
    }
}

fn form(c: &[i64]) -> DiagonalForm {
    DiagonalForm::new(c.to_vec()).expect("static form coefficients")
}

fn solve_free(c: &[i64], target: i64) -> Result<Option<Vec<i64>>> {
    if target < 0 {
        return Ok(None);
    }
    let p = RepProblem::unconstrained(form(c), target)?;
    Ok(solve(&p).map(|w| w.ys))
}

fn solve_constrained(
    c: &[i64],
    target: i64,
    constraint: ResidueConstraint,
) -> Result<Option<Vec<i64>>> {
    if target < 0 {
        return Ok(None);
    }
    let p = RepProblem::new(form(c), target, constraint)?;
    Ok(solve(&p).map(|w| w.ys))
}

fn jones(log: &mut Log, u: i64, v: i64) -> Step<(i64, i64)> {
    if u == 0 && v == 0 {
        return Err(StepError::Claim {
            claim: "binary_x2_2y2_nonzero",
            detail: "zero binary part".into(),
        });
    }
    let r = jones_repair(u, v)?;
    log.expect(r, "binary_x2_2y2_repair", || {
        format!("no repair of {u}^2 + 2*{v}^2")
    })
}

/// `n` at or below which a pipeline defers to direct search.
pub fn small_case_threshold(id: TheoremId) -> Option<i64> {
    Some(match id {
        TheoremId::T21 => 13,
        TheoremId::T22 => 20,
        TheoremId::T23 => 44,
        TheoremId::T24a | TheoremId::T24b => 110,
        TheoremId::L32 => 292,
        TheoremId::L33 => 46,
        TheoremId::L34 => 12,
        TheoremId::L35(7) => 12,
        TheoremId::L35(_) => 14,
        TheoremId::L36 => 117,
        TheoremId::L37 => 142,
        TheoremId::T31 => return None,
    })
}

fn is_small_case(id: TheoremId, n: i64) -> bool {
    match id {
        // Only n = 3m + 1 with m <= 4 is left to direct search.
        TheoremId::T21 => n % 3 == 1 && n <= 13,
        _ => small_case_threshold(id).is_some_and(|t| n <= t),
    }
}

fn notes(id: TheoremId) -> Vec<String> {
    let mut v = Vec::new();
    match id {
        TheoremId::T21 => v.push("direct search covers n = 3m+1 with m <= 4 only".to_string()),
        TheoremId::T23 => v.push(
            "genus step replaced by direct search on the candidate targets; 4-adic descent to bases >= 12 or 12, 24, 36"
                .to_string(),
        ),
        TheoremId::T24b | TheoremId::L34 => v.push(
            "pipeline structure reconstructed from the (1,2,3,7) argument: pinned d in {1,5,7} or {2,4} by parity"
                .to_string(),
        ),
        TheoremId::L35(a) if a != 7 => v.push(
            "pipeline structure reconstructed from the alpha = 7 argument; small-case threshold chosen by search"
                .to_string(),
        ),
        TheoremId::L36 => v.push("x^2 + 8y^2 residue repair verified by instance search".to_string()),
        TheoremId::T31 => v.push("truant search bound is max(bound, 60)".to_string()),
        _ => {}
    }
    if !matches!(id, TheoremId::T31 | TheoremId::L36) {
        v.push("binary x^2 + 2y^2 residue repairs verified by instance search".to_string());
    }
    v
}

fn t21(n: i64, log: &mut Log) -> Step<Vec<i64>> {
    let (m, r) = (n / 3, n % 3);
    let target = if r == 1 { 3 * m - 13 } else { 3 * m + 2 };
    let c = ResidueConstraint::nonzero_mod3_on(&[true, true, false]);
    let s = solve_constrained(&[1, 1, 6], target, c)?;
    let s = log.expect(s, "ternary_1_1_6_nonzero_zt", || {
        format!("<1,1,6> misses {target} with zt prime to 3")
    })?;
    let (z, t, y) = (s[0], s[1], s[2]);
    Ok(match r {
        0 => vec![3 * y + 1, 3 * y - 1, z, t],
        2 => vec![3 * y + 2, 3 * y - 2, z, t],
        _ => vec![3 * y - 5, 3 * y + 5, z, t],
    })
}

fn t22(n: i64, log: &mut Log) -> Step<Vec<i64>> {
    let big = 3 * n + 11;
    let d = if big % 2 == 1 {
        if big % 8 == 7 {
            1
        } else {
            2
        }
    } else if big % 4 == 2 {
        2
    } else {
        1
    };
    let m = big - 18 * d * d;
    log.check(
        m > 0 && criterion_represents(&form(&[1, 1, 9]), m)?,
        "criterion_1_1_9",
        || format!("{m} not represented by <1,1,9> per criterion"),
    )?;
    let s = solve_free(&[1, 1, 9], m)?;
    let s = log.expect(s, "ternary_1_1_9_solve", || {
        format!("<1,1,9> search misses {m}")
    })?;
    let (a, b, c) = (s[0], s[1], s[2]);
    let (e, f) = jones(log, c - 2 * d, c + d)?;
    Ok(vec![a, b, e, f])
}

/// `x^2 + 2y^2 + 9z^2 + 18t^2 = big` with both binary parts nonzero.
fn t23_aux(big: i64, log: &mut Log) -> Step<[i64; 4]> {
    if big % 2 == 1 && big >= 75 {
        let mut found = Vec::new();
        for d in [1i64, 2] {
            let m = big - 18 * d * d;
            let s = solve_free(&[1, 2, 9], m)?;
            let s = log.expect(s, "ternary_1_2_9_both", || format!("<1,2,9> misses {m}"))?;
            found.push((d, m, s));
        }
        let pick = found
            .into_iter()
            .find(|(_, m, _)| !(m % 9 == 0 && is_square(m / 9)));
        let (d, _, s) = log.expect(pick, "non_9_square_candidate", || {
            format!("both candidates for {big} are 9N^2")
        })?;
        return Ok([s[0], s[1], s[2], d]);
    }
    if big % 4 == 2 && big >= 147 {
        let mut found = Vec::new();
        for c in [2i64, 4] {
            let m = big - 9 * c * c;
            let s = solve_free(&[1, 2, 18], m)?;
            let s = log.expect(s, "ternary_1_2_18_both", || format!("<1,2,18> misses {m}"))?;
            found.push((c, m, s));
        }
        let pick = found
            .into_iter()
            .find(|(_, m, _)| !(m % 18 == 0 && is_square(m / 18)));
        let (c, _, s) = log.expect(pick, "non_18_square_candidate", || {
            format!("both candidates for {big} are 18M^2")
        })?;
        return Ok([s[0], s[1], c, s[2]]);
    }
    if big % 4 == 0 && ![12, 24, 36].contains(&big) {
        log.hit("four_adic_descent");
        let w = t23_aux(big / 4, log)?;
        return Ok(w.map(|x| 2 * x));
    }
    let p = RepProblem::unconstrained(form(&[1, 2, 9, 18]), big)?;
    let w = solve_all(&p)
        .map(|w| w.ys)
        .find(|y| (y[0], y[1]) != (0, 0) && (y[2], y[3]) != (0, 0));
    let w = log.expect(w, "aux_direct", || {
        format!("no split representation of {big}")
    })?;
    Ok([w[0], w[1], w[2], w[3]])
}

fn t23(n: i64, log: &mut Log) -> Step<Vec<i64>> {
    let [a, b, c, d] = t23_aux(3 * n + 12, log)?;
    let (e1, f1) = jones(log, a, b)?;
    let (e2, f2) = jones(log, c - 2 * d, c + d)?;
    Ok(vec![e1, f1, e2, f2])
}

/// Sums `(1, 2, 3, top)`: pin the last variable to `d` with the right
/// parity, write the rest as `3a^2 + 3b^2 + 6c^2`, turn `3a^2 + 6c^2` into
/// `e^2 + 2f^2`, and fix `b` by the parity rewrite when `3 | b`.
fn pinned_336(n: i64, top: i64, offset: i64, log: &mut Log) -> Step<Vec<i64>> {
    let big = 3 * n + offset;
    let cands: &[i64] = if big % 2 == 1 { &[1, 5, 7] } else { &[2, 4] };
    let f336 = form(&[3, 3, 6]);
    let mut pick = None;
    for &d in cands {
        let m = big - top * d * d;
        if m > 0 && criterion_represents(&f336, m)? {
            pick = Some((d, m));
            break;
        }
    }
    let (d, m) = log.expect(pick, "candidate_3_3_6", || {
        format!("no d in {cands:?} for {big}")
    })?;
    let s = solve_free(&[3, 3, 6], m)?;
    let s = log.expect(s, "ternary_3_3_6_solve", || {
        format!("<3,3,6> search misses {m}")
    })?;
    let (mut a, mut b, c) = (s[0], s[1], s[2]);
    if a == 0 && c == 0 {
        std::mem::swap(&mut a, &mut b);
    }
    let (e, f) = jones(log, a + 2 * c, a - c)?;
    if !div3(b) {
        return Ok(vec![e, f, b, d]);
    }
    let pq = parity_repair(e, b).ok();
    let (p, q) = log.expect(pq, "parity_repair", || {
        format!("parity of e = {e}, b = {b}")
    })?;
    Ok(vec![p, f, q, d])
}

fn l32(n: i64, log: &mut Log) -> Step<Vec<i64>> {
    let big = 3 * n + 18;
    let f112 = form(&[1, 1, 2]);
    let first = |ds: &[i64]| -> Result<Option<(i64, i64)>> {
        for &d in ds {
            let m = big - 14 * d * d;
            if m > 0 && criterion_represents(&f112, m)? {
                return Ok(Some((d, m)));
            }
        }
        Ok(None)
    };
    let alpha = first(&[1, 2, 4])?;
    let alpha = log.expect(alpha, "alpha_candidate_1_1_2", || {
        format!("no alpha for {big}")
    })?;
    let beta = first(&[5, 7, 8])?;
    let beta = log.expect(beta, "beta_candidate_1_1_2", || {
        format!("no beta for {big}")
    })?;
    let (d, m) = if !is_square(alpha.1) {
        alpha
    } else if !is_square(beta.1) {
        beta
    } else {
        let (d, m) = alpha;
        let s = solve_constrained(&[1, 1, 2], m, ResidueConstraint::nonzero_mod3(3))?;
        let s = log.expect(s, "square_pair_constrained", || {
            format!("<1,1,2> misses {m} with abc prime to 3")
        })?;
        return Ok(vec![s[0], s[1], s[2], d]);
    };
    let s = solve_free(&[1, 1, 2], m)?;
    let s = log.expect(s, "ternary_1_1_2_solve", || {
        format!("<1,1,2> search misses {m}")
    })?;
    let (mut a, mut b, c) = (s[0], s[1], s[2]);
    if !div3(a) && !div3(b) && !div3(c) {
        return Ok(vec![a, b, c, d]);
    }
    if div3(a) {
        std::mem::swap(&mut a, &mut b);
    }
    log.check(!div3(a) && div3(b) && div3(c), "residue_pattern", || {
        format!("({a}, {b}, {c}) mod 3")
    })?;
    let (e, f) = jones(log, b, c)?;
    Ok(vec![a, e, f, d])
}

fn l33(n: i64, log: &mut Log) -> Step<Vec<i64>> {
    let big = 3 * n + 9;
    let mut pick = None;
    for c in [2i64, 5, 7] {
        if let Some(s) = solve_free(&[1, 1, 4], big - 3 * c * c)? {
            pick = Some((c, s));
            break;
        }
    }
    let (c, s) = log.expect(pick, "ternary_1_1_4_candidate", || {
        format!("no c in {{2,5,7}} for {big}")
    })?;
    let w = TauVector::new(s[0], s[1], s[2]);
    if w.is_clean() {
        return Ok(vec![w.a, w.b, c, w.d]);
    }
    log.check(
        div3(w.a) && div3(w.b) && div3(w.d),
        "residue_pattern",
        || format!("{w:?} mod 3"),
    )?;
    let r = tau_repair(w, DEFAULT_MAX_ITERS)?;
    let r = log.expect(r, "tau_repair", || {
        format!("no clean vector of norm {}", w.norm)
    })?;
    Ok(vec![r.a, r.b, c, r.d])
}

fn l35(n: i64, alpha: i64, log: &mut Log) -> Step<Vec<i64>> {
    let big = 3 * n + 12 + alpha;
    let mut pick = None;
    'outer: for d in [1i64, 2] {
        for e in [1i64, 2] {
            let m = big - 7 * d * d - alpha * e * e;
            if m > 0 && m % 4 <= 1 {
                if let Some(s) = solve_free(&[1, 1, 3], m)? {
                    pick = Some((d, e, s));
                    break 'outer;
                }
            }
        }
    }
    let (d, e, s) = log.expect(pick, "ternary_1_1_3_candidate", || {
        format!("no (d, e) in {{1,2}}^2 for {big}")
    })?;
    let (mut a, mut b, c) = (s[0], s[1], s[2]);
    if !div3(c) {
        return Ok(vec![a, b, c, d, e]);
    }
    if (b - c) % 2 != 0 {
        std::mem::swap(&mut a, &mut b);
    }
    log.check((b - c) % 2 == 0 && !div3(b), "parity_alignment", || {
        format!("({a}, {b}, {c})")
    })?;
    let (p, q) = parity_repair(b, c)?;
    log.hit("parity_repair");
    Ok(vec![a, p, q, d, e])
}

fn l36(n: i64, log: &mut Log) -> Step<Vec<i64>> {
    let big = 3 * n + 20;
    let pairs: [(i64, i64); 2] = match big % 4 {
        0 => [(1, 2), (2, 1)],
        1 => [(2, 2), (4, 2)],
        3 => [(1, 1), (5, 1)],
        _ if big % 8 == 2 => [(4, 4), (8, 4)],
        _ if big % 16 == 6 => [(1, 5), (5, 1)],
        _ => [(1, 1), (5, 5)],
    };
    let mut found = Vec::new();
    for (c, d) in pairs {
        let m = big - 3 * c * c - 7 * d * d;
        let s = solve_free(&[1, 1, 8], m)?;
        let s = log.expect(s, "ternary_1_1_8_both", || format!("<1,1,8> misses {m}"))?;
        found.push((c, d, m, s));
    }
    let pick = found.into_iter().find(|(_, _, m, _)| !is_square(*m));
    let (c, d, _, s) = log.expect(pick, "non_square_candidate", || {
        format!("both candidates for {big} are squares")
    })?;
    let (mut a, mut b, e) = (s[0], s[1], s[2]);
    if !div3(a) && !div3(b) && !div3(e) {
        return Ok(vec![a, b, c, d, e]);
    }
    if div3(a) {
        std::mem::swap(&mut a, &mut b);
    }
    log.check(
        !div3(a) && div3(b) && div3(e) && (b, e) != (0, 0),
        "residue_pattern",
        || format!("({a}, {b}, {e}) mod 3"),
    )?;
    let r = plus8_repair(b, e)?;
    let (b2, e2) = log.expect(r, "binary_x2_8y2_repair", || {
        format!("no repair of {b}^2 + 8*{e}^2")
    })?;
    Ok(vec![a, b2, c, d, e2])
}

fn l37(n: i64, log: &mut Log) -> Step<Vec<i64>> {
    let m = n / 3;
    let (base, ts): (i64, [i64; 2]) = match n % 3 {
        0 => (9 * m + 22, [1, 8]),
        1 => (9 * m + 25, [2, 7]),
        _ => (9 * m + 28, [4, 5]),
    };
    let pick = ts.into_iter().find_map(|t| {
        let k = base - 7 * t * t;
        (k > 0 && k % 3 == 0 && (k / 3) % 2 == 1 && !div3(k / 3)).then_some((t, k / 3))
    });
    let (t, l) = log.expect(pick, "odd_candidate_1_4_6", || {
        format!("no odd candidate for {base}")
    })?;
    log.check(
        criterion_represents(&form(&[1, 4, 6]), l)?,
        "criterion_1_4_6",
        || format!("{l}"),
    )?;
    let s = solve_free(&[1, 4, 6], l)?;
    let s = log.expect(s, "ternary_1_4_6_solve", || {
        format!("<1,4,6> search misses {l}")
    })?;
    let (z, sv, x) = (s[0], s[1], s[2]);
    Ok(vec![3 * x - 1, 3 * x + 1, z, t, sv])
}

fn stage(id: TheoremId, n: i64, log: &mut Log) -> Step<Vec<i64>> {
    match id {
        TheoremId::T21 => t21(n, log),
        TheoremId::T22 => t22(n, log),
        TheoremId::T23 => t23(n, log),
        TheoremId::T24a => pinned_336(n, 7, 13, log),
        TheoremId::T24b => pinned_336(n, 9, 15, log),
        TheoremId::L32 => l32(n, log),
        TheoremId::L33 => l33(n, log),
        TheoremId::L34 => pinned_336(n, 3, 9, log),
        TheoremId::L35(a) => l35(n, a, log),
        TheoremId::L36 => l36(n, log),
        TheoremId::L37 => l37(n, log),
        TheoremId::T31 => unreachable!("criterion theorem has no per-n stage"),
    }
}

enum Checked {
    Represented(OctWitness),
    Exception,
}

fn check_n(
    id: TheoremId,
    sum: &OctSum,
    n: i64,
    cache: &ResultCache,
    log: &mut Log,
) -> Step<Checked> {
    let exceptional = id.exceptions().contains(&n);
    if is_small_case(id, n) {
        log.hit("direct_search");
        return match cache.represents(sum, n)? {
            Some(w) if !exceptional => Ok(Checked::Represented(w)),
            Some(w) => Err(StepError::Claim {
                claim: "exception_not_represented",
                detail: format!("{n} is represented by {:?}", w.xs),
            }),
            None if exceptional => Ok(Checked::Exception),
            None => Err(StepError::Claim {
                claim: "direct_search",
                detail: format!("{n} not represented"),
            }),
        };
    }
    let ys = stage(id, n, log)?;
    let target = 3 * n + sum.coeff_sum();
    let f = DiagonalForm::new(sum.coeffs().to_vec())?;
    log.check(
        f.eval(&ys) == Some(target) && ys.iter().all(|&y| !div3(y)),
        "final_form_witness",
        || format!("{ys:?} does not give {target} with entries prime to 3"),
    )?;
    let w = lift_form_witness(&ys).filter(|w| w.certifies(sum, n));
    let w = log.expect(w, "final_octagonal_witness", || {
        format!("{ys:?} does not lift")
    })?;
    if exceptional {
        return Err(StepError::Claim {
            claim: "exception_not_represented",
            detail: format!("{n} is represented"),
        });
    }
    Ok(Checked::Represented(w))
}

fn sample_points(bound: i64) -> Vec<i64> {
    let mut pts: Vec<i64> = (0..SAMPLE_COUNT)
        .map(|i| i * bound / (SAMPLE_COUNT - 1))
        .collect();
    pts.dedup();
    pts
}

fn run_pipeline(id: TheoremId, bound: i64, cache: &ResultCache) -> Result<Certificate> {
    let sum = id.sum().expect("pipeline theorems have a sum");
    let outcomes: Vec<(Log, Step<Checked>)> = (0..=bound)
        .into_par_iter()
        .map(|n| {
            let mut log = Log::default();
            let r = check_n(id, &sum, n, cache, &mut log);
            (log, r)
        })
        .collect();

    let mut claims: BTreeMap<String, u64> = BTreeMap::new();
    let mut exceptions = Vec::new();
    let mut verdict = CertVerdict::Pass;
    let mut witnesses: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    let samples = sample_points(bound);
    for (n, (log, r)) in (0..=bound).zip(outcomes) {
        for (k, v) in log.0 {
            *claims.entry(k.to_string()).or_default() += v;
        }
        match r {
            Ok(Checked::Represented(w)) => {
                if samples.contains(&n) {
                    witnesses.insert(n, w.xs);
                }
            }
            Ok(Checked::Exception) => exceptions.push(n),
            Err(StepError::Engine(e)) => return Err(e),
            Err(StepError::Claim { claim, detail }) => {
                verdict = CertVerdict::Fail {
                    n,
                    claim: claim.to_string(),
                    detail,
                };
                break;
            }
        }
    }
    let sample_witnesses = witnesses
        .into_iter()
        .map(|(n, xs)| SampleWitness {
            n,
            coeffs: sum.coeffs().to_vec(),
            xs,
        })
        .collect();
    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        theorem_id: id,
        coeffs: Some(sum.coeffs().to_vec()),
        bound,
        small_case_threshold: small_case_threshold(id),
        verdict,
        exceptions,
        claims,
        sample_witnesses,
        notes: notes(id),
        engine_version: ENGINE_VERSION.to_string(),
        elapsed: Default::default(),
    })
}

/// The criterion theorem: rebuild the depth-5 escalation tree and check its
/// truant structure against the known table.
fn run_criterion(bound: i64, cache: &ResultCache) -> Result<Certificate> {
    let b = bound.max(60);
    let tree = escalate(5, b)?;
    let mut log = Log::default();
    let result = (|| -> Step<Vec<SampleWitness>> {
        let set: Vec<i64> = criterion_set(&tree)?.into_iter().collect();
        log.check(set == CRITERION_SET, "criterion_set", || {
            format!("truant union {set:?}")
        })?;

        let expected_low: [(&[i64], i64); 10] = [
            (&[], 1),
            (&[1], 2),
            (&[1, 1], 3),
            (&[1, 2], 4),
            (&[1, 1, 1], 4),
            (&[1, 1, 2], 14),
            (&[1, 1, 3], 7),
            (&[1, 2, 2], 6),
            (&[1, 2, 3], 9),
            (&[1, 2, 4], 13),
        ];
        for (coeffs, t) in expected_low {
            let node = tree.find(coeffs).map(|n| n.truant);
            log.check(node == Some(Some(t)), "low_truant_table", || {
                format!("{coeffs:?} has truant {node:?}")
            })?;
        }

        let quads = tree.at_depth(4);
        let truant4: Vec<(Vec<i64>, i64)> = quads
            .iter()
            .filter_map(|q| q.truant.map(|t| (q.sum.coeffs().to_vec(), t)))
            .collect();
        let expected4 = vec![
            (vec![1, 1, 2, 14], 60),
            (vec![1, 1, 3, 4], 18),
            (vec![1, 1, 3, 7], 14),
            (vec![1, 2, 3, 3], 12),
        ];
        log.check(truant4 == expected4, "quaternary_truants", || {
            format!("{truant4:?}")
        })?;
        let mut universal4: Vec<Vec<i64>> = quads
            .iter()
            .filter(|q| q.status == NodeStatus::BoundedUniversal)
            .map(|q| q.sum.coeffs().to_vec())
            .collect();
        universal4.sort();
        let known: Vec<Vec<i64>> = UNIVERSAL_QUATERNARY.iter().map(|q| q.to_vec()).collect();
        log.check(universal4 == known, "quaternary_universal_table", || {
            format!("{} leaves", universal4.len())
        })?;

        let quinary = tree.at_depth(5);
        let stuck: Vec<&[i64]> = quinary
            .iter()
            .filter(|q| q.truant.is_some())
            .map(|q| q.sum.coeffs())
            .collect();
        log.check(stuck.is_empty(), "quinary_leaves_universal", || {
            format!("{stuck:?}")
        })?;

        // Each exceptional value is picked up by the smallest admissible
        // fifth coefficient.
        let mut samples = Vec::new();
        for (coeffs, t) in expected4 {
            let s = OctSum::new(coeffs.clone())?.with_coeff(*coeffs.last().unwrap())?;
            let w = cache.represents(&s, t)?;
            let w = log.expect(w, "exception_covered", || format!("{t} by {s}"))?;
            samples.push(SampleWitness {
                n: t,
                coeffs: s.coeffs().to_vec(),
                xs: w.xs,
            });
        }
        Ok(samples)
    })();
    let (verdict, sample_witnesses) = match result {
        Ok(s) => (CertVerdict::Pass, s),
        Err(StepError::Engine(e)) => return Err(e),
        Err(StepError::Claim { claim, detail }) => (
            CertVerdict::Fail {
                n: 0,
                claim: claim.to_string(),
                detail,
            },
            vec![],
        ),
    };
    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        theorem_id: TheoremId::T31,
        coeffs: None,
        bound,
        small_case_threshold: None,
        verdict,
        exceptions: Vec::new(),
        claims: log.0.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        sample_witnesses,
        notes: notes(TheoremId::T31),
        engine_version: ENGINE_VERSION.to_string(),
        elapsed: Default::default(),
    })
}

pub fn verify_theorem_with(id: TheoremId, bound: i64, cache: &ResultCache) -> Result<Certificate> {
    if bound < 1 {
        return Err(Error::InvalidArgument(format!(
            "bound {bound} must be positive"
        )));
    }
    if bound > MAX_TARGET / 4 {
        return Err(Error::Overflow(format!(
            "bound {bound} outside the exact range"
        )));
    }
    let start = Instant::now();
    let mut cert = match id {
        TheoremId::T31 => run_criterion(bound, cache)?,
        _ => run_pipeline(id, bound, cache)?,
    };
    cert.elapsed = start.elapsed();
    Ok(cert)
}

pub fn verify_theorem(id: TheoremId, bound: i64) -> Result<Certificate> {
    verify_theorem_with(id, bound, &ResultCache::new())
}

/// Every theorem id, in [`TheoremId::all`] order.
pub fn verify_all_with(bound: i64, cache: &ResultCache) -> Result<Vec<Certificate>> {
    TheoremId::all()
        .into_par_iter()
        .map(|id| verify_theorem_with(id, bound, cache))
        .collect()
}

pub fn verify_all(bound: i64) -> Result<Vec<Certificate>> {
    verify_all_with(bound, &ResultCache::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::octagonal::represents;

    #[test]
    fn each_stage_agrees_with_direct_search() {
        for id in TheoremId::all() {
            if id == TheoremId::T31 {
                continue;
            }
            let sum = id.sum().unwrap();
            let start = small_case_threshold(id).unwrap() + 1;
            for n in start..start + 300 {
                let mut log = Log::default();
                match check_n(id, &sum, n, &ResultCache::new(), &mut log) {
                    Ok(Checked::Represented(w)) => {
                        assert!(w.certifies(&sum, n));
                        assert!(represents(&sum, n).unwrap().is_some());
                    }
                    Ok(Checked::Exception) => panic!("{id} {n} exceptional"),
                    Err(e) => panic!("{id} at {n}: {e:?}"),
                }
            }
        }
    }

    #[test]
    fn t21_small_cases_are_only_the_listed_ones() {
        let direct: Vec<i64> = (0..40)
            .filter(|&n| is_small_case(TheoremId::T21, n))
            .collect();
        assert_eq!(direct, vec![1, 4, 7, 10, 13]);
    }

    #[test]
    fn sample_points_are_spread() {
        assert_eq!(sample_points(9), (0..10).collect::<Vec<_>>());
        assert_eq!(sample_points(3), vec![0, 1, 2, 3]);
    }

    #[test]
    fn quaternary_exceptional_sets() {
        let c = verify_theorem(TheoremId::L32, 1000).unwrap();
        assert!(c.passed(), "{:?}", c.verdict);
        assert_eq!(c.exceptions, vec![60]);
        let c = verify_theorem(TheoremId::L33, 1000).unwrap();
        assert_eq!(c.exceptions, vec![18]);
        let c = verify_theorem(TheoremId::L34, 1000).unwrap();
        assert_eq!(c.exceptions, vec![12]);
    }

    #[test]
    fn tiny_bounds_pass_on_direct_search() {
        for c in verify_all(10).unwrap() {
            assert!(c.passed(), "{} {:?}", c.theorem_id, c.verdict);
        }
    }

    #[test]
    fn bad_bounds_are_rejected() {
        assert!(verify_theorem(TheoremId::T21, 0).is_err());
        assert!(verify_theorem(TheoremId::T21, MAX_TARGET).is_err());
    }
}
