//! Acceptance criteria. Each prints one PASS/FAIL line; the process exits
//! nonzero if any fails. All comparisons are exact.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use octsum_core::escalator::UNIVERSAL_QUATERNARY;
use octsum_core::qform::CatalogForm;
use octsum_core::repair::eigen_escape;
use octsum_core::verify::ResultCache;
use octsum_core::{
    criterion_set, escalate, exceptions_up_to, jones_repair, parity_repair, represents, tau_step,
    verify_all, verify_criterion, OctSum, TauVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn sum(c: &[i64]) -> OctSum {
    OctSum::new(c.to_vec()).unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1() -> Check {
    for c in [
        [1, 1, 3, 3],
        [1, 1, 3, 6],
        [1, 2, 3, 6],
        [1, 2, 3, 7],
        [1, 2, 3, 9],
    ] {
        let ex = exceptions_up_to(&sum(&c), 100_000).map_err(|e| e.to_string())?;
        ensure(
            ex.is_empty(),
            format!("{c:?} misses {:?}", &ex[..ex.len().min(5)]),
        )?;
    }
    Ok("five quaternary sums miss nothing in [1, 1e5]".into())
}

fn c2() -> Check {
    for (c, want) in [([1, 1, 2, 14], 60), ([1, 1, 3, 4], 18), ([1, 2, 3, 3], 12)] {
        let ex = exceptions_up_to(&sum(&c), 100_000).map_err(|e| e.to_string())?;
        ensure(ex == vec![want], format!("{c:?} misses {ex:?}"))?;
    }
    let r = represents(&sum(&[1, 1, 3, 7]), 14).map_err(|e| e.to_string())?;
    ensure(r.is_none(), format!("(1,1,3,7) represents 14 via {r:?}"))?;
    Ok("exceptional sets {60}, {18}, {12} in [1, 1e5]; 14 missed by (1,1,3,7)".into())
}

fn c3() -> Check {
    let tree = escalate(4, 10_000).map_err(|e| e.to_string())?;
    let got: serde_json::Value =
        serde_json::from_str(&tree.to_json().map_err(|e| e.to_string())?).unwrap();
    let golden: serde_json::Value =
        serde_json::from_str(include_str!("golden/escalation_depth4.json")).unwrap();
    ensure(got == golden, "tree differs from golden file")?;
    let mut leaves: Vec<Vec<i64>> = tree
        .at_depth(4)
        .iter()
        .filter(|n| n.truant.is_none())
        .map(|n| n.sum.coeffs().to_vec())
        .collect();
    leaves.sort();
    let known: Vec<Vec<i64>> = UNIVERSAL_QUATERNARY.iter().map(|q| q.to_vec()).collect();
    ensure(
        leaves == known,
        "universal leaves differ from the 40 quadruples",
    )?;
    Ok("depth-4 tree matches golden JSON; 40 universal quadruples".into())
}

fn c4() -> Check {
    let tree = escalate(5, 10_000).map_err(|e| e.to_string())?;
    let set = criterion_set(&tree).map_err(|e| e.to_string())?;
    let want: BTreeSet<i64> = [1, 2, 3, 4, 6, 7, 9, 12, 13, 14, 18, 60].into();
    ensure(set == want, format!("criterion set {set:?}"))?;
    Ok(format!("depth-5 criterion set {set:?}"))
}

fn c5() -> Check {
    for a in 7..=14 {
        let ex = exceptions_up_to(&sum(&[1, 1, 3, 7, a]), 100_000).map_err(|e| e.to_string())?;
        ensure(
            ex.is_empty(),
            format!("(1,1,3,7,{a}) misses {:?}", &ex[..ex.len().min(5)]),
        )?;
    }
    Ok("(1,1,3,7,a) for a in 7..=14 miss nothing in [1, 1e5]".into())
}

fn c6() -> Check {
    let mut counts = Vec::new();
    for f in CatalogForm::ALL {
        let r = verify_criterion(&f.form(), 10_000).map_err(|e| e.to_string())?;
        ensure(
            r.disagreements.is_empty(),
            format!("{}: {:?}", r.form, r.disagreements),
        )?;
        ensure(r.in_domain > 0, format!("{}: empty domain", r.form))?;
        counts.push(format!("{} on {}", r.form, r.in_domain));
    }
    Ok(format!(
        "no disagreements up to 1e4 ({})",
        counts.join(", ")
    ))
}

fn c7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let v = TauVector::new(
            3 * rng.gen_range(-300..=300),
            3 * rng.gen_range(-300..=300),
            3 * rng.gen_range(-300..=300),
        );
        let w = tau_step(v).map_err(|e| e.to_string())?;
        ensure(
            w.computed_norm() == v.norm && w.norm == v.norm,
            format!("tau changes the norm of {v:?}"),
        )?;
    }
    for e in -200i64..=200 {
        for b in -200i64..=200 {
            if (e - b).rem_euclid(2) != 0 {
                continue;
            }
            let (p, q) = parity_repair(e, b).map_err(|x| x.to_string())?;
            ensure(
                p * p + 3 * q * q == e * e + 3 * b * b,
                format!("parity identity at ({e}, {b})"),
            )?;
            if e % 3 != 0 && b % 3 == 0 {
                ensure(
                    p % 3 != 0 && q % 3 != 0,
                    format!("parity residues at ({e}, {b})"),
                )?;
            }
        }
    }
    let mut checked = 0;
    for c in -60i64..=60 {
        for d in -60i64..=60 {
            let (u, v) = (c - 2 * d, c + d);
            if (u, v) == (0, 0) {
                continue;
            }
            let r = jones_repair(u, v).map_err(|x| x.to_string())?;
            let (e, f) = r.ok_or(format!("no jones repair for c = {c}, d = {d}"))?;
            ensure(
                e * e + 2 * f * f == u * u + 2 * v * v && e % 3 != 0 && f % 3 != 0,
                format!("bad repair at ({c}, {d})"),
            )?;
            checked += 1;
        }
    }
    for t in 1..=3 {
        let w = TauVector::new(2 * t, 12 * t, -5 * t);
        let x = eigen_escape(&w).ok_or(format!("no escape at t = {t}"))?;
        ensure(
            (x.a, x.b, x.d) == (14 * t, 6 * t, 2 * t),
            format!("escape at t = {t} gave {x:?}"),
        )?;
        ensure(
            w.norm == 248 * t * t && x.computed_norm() == 248 * t * t,
            format!("norms at t = {t}"),
        )?;
    }
    Ok(format!(
        "tau 1000 random; parity |e|,|b| <= 200; jones {checked} inputs; escape t = 1..3"
    ))
}

fn c8() -> Check {
    let start = Instant::now();
    let a = verify_all(10_000).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let b = verify_all(10_000).map_err(|e| e.to_string())?;
    ensure(a.len() == 17, format!("{} certificates", a.len()))?;
    for c in &a {
        ensure(
            c.passed(),
            format!("{} failed: {:?}", c.theorem_id, c.verdict),
        )?;
    }
    for (x, y) in a.iter().zip(&b) {
        ensure(
            x.to_json().unwrap() == y.to_json().unwrap(),
            format!("{} not deterministic", x.theorem_id),
        )?;
    }
    ensure(secs < 300.0, format!("took {secs:.1}s"))?;
    Ok(format!(
        "17 certificates pass at 1e4 in {secs:.1}s; byte-identical reruns"
    ))
}

/// Reachable values of a sum up to `n`, by dynamic programming over the
/// octagonal values `3x^2 - 2x` listed directly.
fn oracle(coeffs: &[i64], n: i64) -> bool {
    let n = n as usize;
    let mut vals = Vec::new();
    for x in -100i64..=100 {
        let v = 3 * x * x - 2 * x;
        if v as usize <= n {
            vals.push(v as usize);
        }
    }
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &a in coeffs {
        let mut next = vec![false; n + 1];
        for (s, _) in reach.iter().enumerate().filter(|(_, r)| **r) {
            for &v in &vals {
                let t = s + a as usize * v;
                if t <= n {
                    next[t] = true;
                }
            }
        }
        reach = next;
    }
    reach[n]
}

fn c9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cache = ResultCache::new();
    let mut hits = 0;
    for _ in 0..500 {
        let k = rng.gen_range(1..=5);
        let coeffs: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=15)).collect();
        let n = rng.gen_range(0..=2000);
        let s = sum(&coeffs);
        let got = represents(&s, n).map_err(|e| e.to_string())?;
        let want = oracle(&coeffs, n);
        ensure(
            got.is_some() == want,
            format!("{s} at {n}: engine {} oracle {want}", got.is_some()),
        )?;
        ensure(
            cache
                .represents(&s, n)
                .map_err(|e| e.to_string())?
                .is_some()
                == want,
            "cache disagrees",
        )?;
        hits += want as usize;
    }
    Ok(format!(
        "500 random pairs agree with brute force ({hits} represented)"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 quaternary sums universal to 1e5", c1),
        ("2 exceptional values", c2),
        ("3 depth-4 escalation golden", c3),
        ("4 depth-5 criterion set", c4),
        ("5 quinary sums universal to 1e5", c5),
        ("6 ternary criteria cross-check", c6),
        ("7 repair properties", c7),
        ("8 verify_all determinism", c8),
        ("9 oracle equivalence", c9),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let r = f();
        let t = start.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{t:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{t:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
