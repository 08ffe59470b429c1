//! Diagonal positive definite forms `<a_1, ..., a_n>`: constrained
//! representation search, full solution enumeration, and the closed-form
//! criteria for a small catalogue of ternary forms with class number one.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, signed_candidate};
use crate::error::{Error, Result};

/// Largest target accepted by [`solve`] and [`solve_all`].
pub const MAX_FORM_TARGET: i64 = 1 << 44;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiagonalForm {
    coeffs: Vec<i64>,
}

impl DiagonalForm {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if let Some(&bad) = coeffs.iter().find(|&&a| !(1..=1 << 20).contains(&a)) {
            return Err(Error::InvalidCoefficient(bad));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, ys: &[i64]) -> Option<i64> {
        if ys.len() != self.coeffs.len() {
            return None;
        }
        self.coeffs.iter().zip(ys).try_fold(0i64, |acc, (&a, &y)| {
            y.checked_mul(y)?.checked_mul(a)?.checked_add(acc)
        })
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|a| a.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

/// Per-variable sets of admissible residues modulo a common modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueConstraint {
    modulus: i64,
    allowed: Vec<Vec<bool>>,
}

impl ResidueConstraint {
    pub fn new(modulus: i64, sets: Vec<Vec<i64>>) -> Result<Self> {
        if !(1..=1 << 16).contains(&modulus) {
            return Err(Error::InvalidConstraint(format!("modulus {modulus}")));
        }
        let mut allowed = Vec::with_capacity(sets.len());
        for set in sets {
            let mut mask = vec![false; modulus as usize];
            for r in set {
                if !(0..modulus).contains(&r) {
                    return Err(Error::InvalidConstraint(format!(
                        "residue {r} mod {modulus}"
                    )));
                }
                mask[r as usize] = true;
            }
            if !mask.iter().any(|&b| b) {
                return Err(Error::InvalidConstraint("empty residue set".into()));
            }
            allowed.push(mask);
        }
        Ok(Self { modulus, allowed })
    }

    /// No restriction on any of `arity` variables.
    pub fn trivial(arity: usize) -> Self {
        Self {
            modulus: 1,
            allowed: vec![vec![true]; arity],
        }
    }

    /// Every variable restricted to `{1, 2} mod 3`.
    pub fn nonzero_mod3(arity: usize) -> Self {
        Self {
            modulus: 3,
            allowed: vec![vec![false, true, true]; arity],
        }
    }

    /// `{1, 2} mod 3` on the variables flagged `true`, free elsewhere.
    pub fn nonzero_mod3_on(flags: &[bool]) -> Self {
        let allowed = flags
            .iter()
            .map(|&f| {
                if f {
                    vec![false, true, true]
                } else {
                    vec![true; 3]
                }
            })
            .collect();
        Self {
            modulus: 3,
            allowed,
        }
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn arity(&self) -> usize {
        self.allowed.len()
    }

    #[inline]
    pub fn allows(&self, var: usize, y: i64) -> bool {
        self.allowed[var][y.rem_euclid(self.modulus) as usize]
    }
}

/// A target, a form and per-variable constraints. Variables may be pinned
/// to a fixed value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepProblem {
    form: DiagonalForm,
    target: i64,
    constraint: ResidueConstraint,
    pins: Vec<Option<i64>>,
}

impl RepProblem {
    pub fn new(form: DiagonalForm, target: i64, constraint: ResidueConstraint) -> Result<Self> {
        if constraint.arity() != form.arity() {
            return Err(Error::InvalidConstraint(format!(
                "constraint arity {} differs from form arity {}",
                constraint.arity(),
                form.arity()
            )));
        }
        if target > MAX_FORM_TARGET {
            return Err(Error::Overflow(format!(
                "form target {target} exceeds 2^44"
            )));
        }
        let pins = vec![None; form.arity()];
        Ok(Self {
            form,
            target,
            constraint,
            pins,
        })
    }

    pub fn unconstrained(form: DiagonalForm, target: i64) -> Result<Self> {
        let c = ResidueConstraint::trivial(form.arity());
        Self::new(form, target, c)
    }

    /// Fixes variable `var` to `value`.
    pub fn pin(mut self, var: usize, value: i64) -> Result<Self> {
        if var >= self.pins.len() {
            return Err(Error::InvalidArgument(format!(
                "pin index {var} out of range"
            )));
        }
        if value.unsigned_abs() > 1 << 22 {
            return Err(Error::Overflow(format!("pinned value {value}")));
        }
        self.pins[var] = Some(value);
        Ok(self)
    }

    pub fn form(&self) -> &DiagonalForm {
        &self.form
    }

    pub fn target(&self) -> i64 {
        self.target
    }

    pub fn constraint(&self) -> &ResidueConstraint {
        &self.constraint
    }

    pub fn pins(&self) -> &[Option<i64>] {
        &self.pins
    }

    pub fn accepts(&self, w: &FormWitness) -> bool {
        self.form.eval(&w.ys) == Some(self.target)
            && w.ys
                .iter()
                .enumerate()
                .all(|(i, &y)| self.constraint.allows(i, y) && self.pins[i].is_none_or(|p| p == y))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FormWitness {
    pub ys: Vec<i64>,
}

/// Lazy enumeration of every solution of a [`RepProblem`], each exactly
/// once, in lexicographic order of `(|y_1|, y_1 < 0, |y_2|, ...)`.
pub struct Solutions<'a> {
    problem: &'a RepProblem,
    ys: Vec<i64>,
    rems: Vec<i64>,
    cursor: Vec<u64>,
    depth: usize,
    started: bool,
    done: bool,
}

impl<'a> Solutions<'a> {
    fn new(problem: &'a RepProblem) -> Self {
        let k = problem.form.arity();
        Self {
            problem,
            ys: vec![0; k],
            rems: vec![problem.target; k.max(1)],
            cursor: vec![0; k],
            depth: 0,
            started: false,
            done: problem.target < 0,
        }
    }

    /// Next admissible value for variable `i` given the remaining target.
    fn advance(&mut self, i: usize) -> Option<i64> {
        let p = self.problem;
        let a = p.form.coeffs[i];
        let rem = self.rems[i];
        let last = i + 1 == p.form.arity();
        if let Some(v) = p.pins[i] {
            if self.cursor[i] > 0 {
                return None;
            }
            self.cursor[i] = 1;
            let t = a * v * v;
            let fits = if last { t == rem } else { t <= rem };
            return (fits && p.constraint.allows(i, v)).then_some(v);
        }
        if last {
            if rem % a != 0 {
                return None;
            }
            let s = exact_sqrt(rem / a)?;
            loop {
                let c = self.cursor[i];
                self.cursor[i] += 1;
                let y = match (c, s) {
                    (0, _) => s,
                    (1, s) if s > 0 => -s,
                    _ => return None,
                };
                if p.constraint.allows(i, y) {
                    return Some(y);
                }
            }
        }
        loop {
            let y = signed_candidate(self.cursor[i]);
            if a * y * y > rem {
                return None;
            }
            self.cursor[i] += 1;
            if p.constraint.allows(i, y) {
                return Some(y);
            }
        }
    }
}

impl Iterator for Solutions<'_> {
    type Item = FormWitness;

    fn next(&mut self) -> Option<FormWitness> {
        if self.done {
            return None;
        }
        let k = self.problem.form.arity();
        if k == 0 {
            self.done = true;
            return (self.problem.target == 0).then(|| FormWitness { ys: vec![] });
        }
        if self.started {
            // Resume from the deepest level after the last emitted solution.
            self.depth = k - 1;
        }
        self.started = true;
        loop {
            let i = self.depth;
            match self.advance(i) {
                Some(y) => {
                    self.ys[i] = y;
                    if i + 1 == k {
                        let w = FormWitness {
                            ys: self.ys.clone(),
                        };
                        assert!(
                            self.problem.accepts(&w),
                            "solver produced an invalid witness"
                        );
                        return Some(w);
                    }
                    let a = self.problem.form.coeffs[i];
                    self.rems[i + 1] = self.rems[i] - a * y * y;
                    self.cursor[i + 1] = 0;
                    self.depth = i + 1;
                }
                None => {
                    if i == 0 {
                        self.done = true;
                        return None;
                    }
                    self.depth = i - 1;
                }
            }
        }
    }
}

pub fn solve_all(problem: &RepProblem) -> Solutions<'_> {
    Solutions::new(problem)
}

/// The first solution of [`solve_all`], if any.
pub fn solve(problem: &RepProblem) -> Option<FormWitness> {
    solve_all(problem).next()
}

pub fn represents_unconstrained(form: &DiagonalForm, n: i64) -> Result<bool> {
    if n < 0 {
        return Ok(false);
    }
    let p = RepProblem::unconstrained(form.clone(), n)?;
    Ok(solve(&p).is_some())
}

/// Integers of the shape `scale * 4^s * (8t + 7)`, plus an optional residue
/// condition that members of the represented set must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExclusionRule {
    pub scale: i64,
    pub required_residue: Option<(i64, i64)>,
}

impl ExclusionRule {
    pub const fn new(scale: i64) -> Self {
        Self {
            scale,
            required_residue: None,
        }
    }

    pub const fn requiring(scale: i64, residue: i64, modulus: i64) -> Self {
        Self {
            scale,
            required_residue: Some((residue, modulus)),
        }
    }
}

pub fn excluded_by_rule(rule: &ExclusionRule, n: i64) -> bool {
    if let Some((r, m)) = rule.required_residue {
        if n.rem_euclid(m) != r {
            return true;
        }
    }
    if n <= 0 || n % rule.scale != 0 {
        return false;
    }
    let mut m = n / rule.scale;
    while m % 4 == 0 {
        m /= 4;
    }
    m % 8 == 7
}

/// The ternary forms whose representation sets are known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogForm {
    /// `<1,1,2>`: everything except `2 * 4^s (8t + 7)`.
    F112,
    /// `<1,1,9>`: on `n = 2 mod 3`, everything except `4^s (8t + 7)`.
    F119,
    /// `<3,3,6>`: multiples of 3 except `6 * 4^s (8t + 7)`.
    F336,
    /// `<1,4,6>`: every odd `n` prime to 3.
    F146,
}

impl CatalogForm {
    pub const ALL: [CatalogForm; 4] = [Self::F112, Self::F119, Self::F336, Self::F146];

    pub fn lookup(form: &DiagonalForm) -> Result<Self> {
        let mut c = form.coeffs().to_vec();
        c.sort_unstable();
        match c.as_slice() {
            [1, 1, 2] => Ok(Self::F112),
            [1, 1, 9] => Ok(Self::F119),
            [3, 3, 6] => Ok(Self::F336),
            [1, 4, 6] => Ok(Self::F146),
            _ => Err(Error::UnknownCatalogForm(form.to_string())),
        }
    }

    pub fn form(self) -> DiagonalForm {
        let c = match self {
            Self::F112 => vec![1, 1, 2],
            Self::F119 => vec![1, 1, 9],
            Self::F336 => vec![3, 3, 6],
            Self::F146 => vec![1, 4, 6],
        };
        DiagonalForm { coeffs: c }
    }

    pub fn rule(self) -> Option<ExclusionRule> {
        match self {
            Self::F112 => Some(ExclusionRule::new(2)),
            Self::F119 => Some(ExclusionRule::new(1)),
            Self::F336 => Some(ExclusionRule::requiring(6, 0, 3)),
            Self::F146 => None,
        }
    }

    /// Whether the closed form is asserted for `n`.
    pub fn in_domain(self, n: i64) -> bool {
        match self {
            Self::F112 | Self::F336 => true,
            Self::F119 => n.rem_euclid(3) == 2,
            Self::F146 => n % 2 != 0 && n % 3 != 0,
        }
    }
}

/// Representation by a catalogue form, decided by its closed-form criterion
/// inside the asserted residue classes and by search outside them.
pub fn criterion_represents(form: &DiagonalForm, n: i64) -> Result<bool> {
    let cat = CatalogForm::lookup(form)?;
    if n <= 0 {
        return Ok(n == 0);
    }
    if !cat.in_domain(n) {
        return represents_unconstrained(form, n);
    }
    Ok(match cat.rule() {
        Some(rule) => !excluded_by_rule(&rule, n),
        None => true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub form: DiagonalForm,
    pub bound: i64,
    /// How many `n` in `[1, bound]` fell inside the asserted residue classes.
    pub in_domain: usize,
    pub disagreements: Vec<i64>,
}

/// Compares [`criterion_represents`] with plain search on `[1, bound]`.
pub fn verify_criterion(form: &DiagonalForm, bound: i64) -> Result<CriterionReport> {
    let cat = CatalogForm::lookup(form)?;
    let mut in_domain = 0;
    let mut disagreements = Vec::new();
    for n in 1..=bound {
        if !cat.in_domain(n) {
            continue;
        }
        in_domain += 1;
        if criterion_represents(form, n)? != represents_unconstrained(form, n)? {
            disagreements.push(n);
        }
    }
    Ok(CriterionReport {
        form: form.clone(),
        bound,
        in_domain,
        disagreements,
    })
}
