//! Kubota–Leopoldt branches `ζ_{p,i}(s) = L_p(s, ω^(1−i))`.
//!
//! Three independent routes:
//!
//! * **Haar**: `((−1)^(i−1)/(s−1)) · lim p^(−n) Σ_{m<p^n, p∤m} ω(m)^(1−i) ⟨m⟩^(1−s)`.
//! * **Bernoulli**: the same branch against the regularized Bernoulli measure,
//!   `−(1 − ω(2)^(1−i)⟨2⟩^(1−s))^(−1) · lim Σ_{m<p^n, p∤m} ω(m)^(−i) ⟨m⟩^(−s) (−1)^m / 2`.
//! * **Washington**: the closed expansion around `s = 1`,
//!   `(s−1) ζ = p^(−1) Σ_{a=1}^{p−1} ω(a)^(1−i) ⟨a⟩^(1−s) Σ_j C(1−s, j) B_j (p/a)^j`.
//!
//! The first two are level sums and share one enumeration pass; the third is a
//! finite sum. Agreement between them is the correctness check.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bernoulli::{bernoulli_number, teichmuller_powers, Rational};
use crate::error::{Error, Result};
use crate::integration::{volkenborn_riemann, ConvergenceReport, Integrand, Tracker};
use crate::levels::{class_power_sums, twist};
use crate::padic::{one_unit_power, padic_binom, unit_decompose, PadicContext, PadicNumber, PowerMethod};

/// Residue class `i mod (p − 1)`, stored in `[0, p − 2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ZetaBranch {
    i: u32,
    p: u32,
}

impl ZetaBranch {
    pub fn new(i: i64, p: u32) -> Self {
        ZetaBranch { i: i.rem_euclid(p as i64 - 1) as u32, p }
    }

    pub fn index(&self) -> u32 {
        self.i
    }

    /// `ω^(1−i)` is odd, so the branch vanishes identically.
    pub fn is_odd_character(&self) -> bool {
        self.i % 2 == 0
    }

    fn sign(&self) -> i64 {
        if self.i % 2 == 1 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for ZetaBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.i)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ZetaMethod {
    Haar,
    Bernoulli,
    Washington,
}

impl ZetaMethod {
    pub const ALL: [ZetaMethod; 3] = [ZetaMethod::Haar, ZetaMethod::Bernoulli, ZetaMethod::Washington];

    pub fn name(&self) -> &'static str {
        match self {
            ZetaMethod::Haar => "haar",
            ZetaMethod::Bernoulli => "bernoulli",
            ZetaMethod::Washington => "washington",
        }
    }
}

impl fmt::Display for ZetaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ZetaMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ZetaMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown zeta method {s:?}")))
    }
}

/// One evaluation of `ζ_{p,i}(s)`.
#[derive(Clone, Debug)]
pub struct ZetaEval {
    pub branch: ZetaBranch,
    pub s: PadicNumber,
    pub method: ZetaMethod,
    pub value: PadicNumber,
    /// Level-sum history; the Washington route reports its term count as `evaluations`.
    pub report: ConvergenceReport,
}

fn check_argument(s: &PadicNumber) -> Result<()> {
    if !s.is_zero() && s.valuation() < 0 {
        return Err(Error::Domain(format!("s must lie in Z_p, got v_p(s) = {}", s.valuation())));
    }
    Ok(())
}

/// `v_p(s − 1)`, or `None` when `s` is indistinguishable from 1.
fn pole_distance(s: &PadicNumber) -> Option<i64> {
    let d = s.sub_ref(&PadicNumber::one(s.prime(), s.absolute_precision().max(1) as u32));
    (!d.is_zero()).then(|| d.valuation())
}

fn require_precision(s: &PadicNumber, needed: i64) -> Result<()> {
    if s.absolute_precision() < needed {
        return Err(Error::InsufficientPrecision(format!(
            "s known to O(p^{}) but O(p^{needed}) is needed",
            s.absolute_precision()
        )));
    }
    Ok(())
}

fn pole_error(branch: ZetaBranch, method: ZetaMethod) -> Error {
    if branch.index() == 1 {
        Error::Pole("ζ_{p,1} has a simple pole at s = 1".into())
    } else {
        Error::Domain(format!("the {method} route divides by s − 1 and cannot evaluate at s = 1"))
    }
}

/// `1 − ω(2)^(1−i) ⟨2⟩^(1−s)` to `O(p^abs)`.
fn bernoulli_prefactor(branch: ZetaBranch, s: &PadicNumber, abs: i64) -> Result<PadicNumber> {
    let p = branch.p;
    let d = unit_decompose(&PadicNumber::from_int(p, 2, abs as u32))?;
    let t = PadicNumber::one(p, abs as u32).sub_ref(s);
    let pw = one_unit_power(&d.one_unit, &t, PowerMethod::ExpLog)?;
    let w = d.teichmuller.pow((1 - branch.index() as i64).rem_euclid(p as i64 - 1) as u64);
    Ok(PadicNumber::one(p, abs as u32).sub_ref(&w.mul_ref(&pw)))
}

struct RouteState {
    branch: ZetaBranch,
    haar: Option<(Tracker, i64)>,
    bern: Option<(Tracker, PadicNumber)>,
}

/// Runs the Haar and/or Bernoulli routes for several branches in a single pass.
fn level_routes(
    branches: &[ZetaBranch],
    s: &PadicNumber,
    ctx: &PadicContext,
    k: i64,
    haar: bool,
    bern: bool,
) -> Vec<(ZetaBranch, Option<Result<ZetaEval>>, Option<Result<ZetaEval>>)> {
    let p = ctx.prime();
    let top = ctx.max_level();
    let e = pole_distance(s);
    let mut states = Vec::new();
    let mut out_err = Vec::new();
    let mut w_needed = 1i64;
    for &b in branches {
        let h = if !haar {
            None
        } else {
            match e {
                None => Some(Err(pole_error(b, ZetaMethod::Haar))),
                Some(e) => match require_precision(s, k + e + 2) {
                    Err(err) => Some(Err(err)),
                    Ok(()) => {
                        w_needed = w_needed.max(top as i64 + k + e + 2);
                        Some(Ok(e))
                    }
                },
            }
        };
        let bn = if !bern {
            None
        } else {
            match bernoulli_prefactor(b, s, k + 24) {
                Err(err) => Some(Err(err)),
                Ok(d) if d.is_zero() => Some(Err(Error::Pole(format!(
                    "prefactor 1 − ω(2)^(1−i)⟨2⟩^(1−s) vanishes on branch {b}"
                )))),
                Ok(d) => {
                    let g = d.valuation();
                    match require_precision(s, k + g + 2) {
                        Err(err) => Some(Err(err)),
                        Ok(()) => {
                            w_needed = w_needed.max(k + g + 2);
                            Some(Ok(d))
                        }
                    }
                }
            }
        };
        let mut st = RouteState { branch: b, haar: None, bern: None };
        let mut errs = (None, None);
        match h {
            Some(Ok(e)) => st.haar = Some((Tracker::new(k + e), e)),
            Some(Err(err)) => errs.0 = Some(err),
            None => {}
        }
        match bn {
            Some(Ok(d)) => st.bern = Some((Tracker::new(k + d.valuation()), d)),
            Some(Err(err)) => errs.1 = Some(err),
            None => {}
        }
        states.push(st);
        out_err.push(errs);
    }

    let w = w_needed as u32;
    let active = states.iter().any(|st| st.haar.is_some() || st.bern.is_some());
    if active {
        // ⟨m⟩^(−s) = ⟨m⟩^T for any integer T ≡ −s mod p^(w−1).
        let t = s.neg_ref().lift_abs(w as i64).to_residue(w - 1).expect("s ∈ Z_p with enough precision");
        let t_mod = (&t % (p - 1)).iter_u64_digits().next().unwrap_or(0) as i64;
        let half = PadicNumber::from_rational(1, 2, p, w).expect("2 ≠ 0");
        let mut last_count = 0u64;
        let visited = class_power_sums(p, w, &t, true, top, |sums| {
            let n = sums.level;
            let count = (p as u64 - 1) * (p as u64).pow(n - 1) - last_count;
            last_count += count;
            let mut all_done = true;
            for st in states.iter_mut() {
                let ew = -(st.branch.index() as i64) - t_mod;
                if let Some((tr, _)) = st.haar.as_mut() {
                    let v = PadicNumber::from_residue(p, &twist(p, w, ew, &sums.plain), w as i64).shift(-(n as i64));
                    all_done &= tr.push(n, v, count);
                }
                if let Some((tr, _)) = st.bern.as_mut() {
                    let v = PadicNumber::from_residue(p, &twist(p, w, ew, &sums.signed), w as i64).mul_ref(&half);
                    all_done &= tr.push(n, v, count);
                }
            }
            all_done
        });
        debug_assert_eq!(visited, last_count);
    }

    states
        .into_iter()
        .zip(out_err)
        .map(|(st, (herr, berr))| {
            let b = st.branch;
            let h = match (st.haar, herr) {
                (Some((tr, _)), _) => Some(finish(b, s, ZetaMethod::Haar, tr.finish(), k, |inner| {
                    let s1 = s.sub_ref(&PadicNumber::one(p, s.absolute_precision() as u32));
                    inner.mul_i64(b.sign()).div(&s1)
                })),
                (None, Some(err)) => Some(Err(err)),
                (None, None) => None,
            };
            let bn = match (st.bern, berr) {
                (Some((tr, d)), _) => {
                    Some(finish(b, s, ZetaMethod::Bernoulli, tr.finish(), k, |inner| inner.neg_ref().div(&d)))
                }
                (None, Some(err)) => Some(Err(err)),
                (None, None) => None,
            };
            (b, h, bn)
        })
        .collect()
}

fn finish(
    branch: ZetaBranch,
    s: &PadicNumber,
    method: ZetaMethod,
    report: ConvergenceReport,
    k: i64,
    scale: impl FnOnce(&PadicNumber) -> Result<PadicNumber>,
) -> Result<ZetaEval> {
    if !report.converged {
        return Err(Error::NotSummable(format!(
            "{method} route for branch {branch} did not converge by level {} (deltas {:?})",
            report.levels, report.deltas
        )));
    }
    let value = scale(&report.value)?.truncate_abs(k);
    Ok(ZetaEval { branch, s: s.clone(), method, value, report })
}

pub fn zeta_haar(i: i64, s: &PadicNumber, ctx: &PadicContext, k: i64) -> Result<ZetaEval> {
    check_argument(s)?;
    let b = ZetaBranch::new(i, ctx.prime());
    level_routes(&[b], s, ctx, k, true, false).pop().and_then(|r| r.1).expect("one branch requested")
}

pub fn zeta_bernoulli(i: i64, s: &PadicNumber, ctx: &PadicContext, k: i64) -> Result<ZetaEval> {
    check_argument(s)?;
    let b = ZetaBranch::new(i, ctx.prime());
    level_routes(&[b], s, ctx, k, false, true).pop().and_then(|r| r.2).expect("one branch requested")
}

pub fn zeta_washington(i: i64, s: &PadicNumber, ctx: &PadicContext, k: i64) -> Result<ZetaEval> {
    check_argument(s)?;
    let p = ctx.prime();
    let branch = ZetaBranch::new(i, p);
    let e = pole_distance(s).ok_or_else(|| pole_error(branch, ZetaMethod::Washington))?;
    require_precision(s, k + e + 2)?;
    let work = k + e + 4;
    let t = PadicNumber::one(p, work as u32).sub_ref(s);
    let chi = teichmuller_powers(p, 1 - branch.index() as i64, work as u32);
    // v(B_j p^j / a^j) ≥ j − 1 and C(1−s, j) ∈ Z_p; one more digit is lost to 1/p.
    let terms = (work + 2) as usize;
    let binoms: Vec<PadicNumber> = (0..=terms).map(|j| padic_binom(&t, j as u64)).collect();
    let pr = Rational::from_integer(BigInt::from(p));
    let mut total = PadicNumber::zero(p, work + 1);
    for a in 1..p {
        let ar = Rational::from_integer(BigInt::from(a));
        let mut inner = PadicNumber::zero(p, work + 1);
        for (j, c) in binoms.iter().enumerate() {
            let b = bernoulli_number(j);
            if b.is_zero() {
                continue;
            }
            let r = b * (&pr / &ar).pow(j as i32);
            inner = inner.add_ref(&c.mul_ref(&PadicNumber::from_ratio_abs(&r, p, work + 1)));
        }
        let x = unit_decompose(&PadicNumber::from_int(p, a as i64, work as u32 + 1))?;
        let pw = one_unit_power(&x.one_unit, &t, PowerMethod::ExpLog)?;
        total = total.add_ref(&chi[a as usize - 1].mul_ref(&pw).mul_ref(&inner));
    }
    let residue_part = total.shift(-1);
    let s1 = s.sub_ref(&PadicNumber::one(p, s.absolute_precision() as u32));
    let value = residue_part.div(&s1)?.truncate_abs(k);
    let report = ConvergenceReport {
        value: value.clone(),
        levels: 0,
        deltas: Vec::new(),
        converged: true,
        evaluations: (p as u64 - 1) * (terms as u64 + 1),
    };
    Ok(ZetaEval { branch, s: s.clone(), method: ZetaMethod::Washington, value, report })
}

pub fn zeta(method: ZetaMethod, i: i64, s: &PadicNumber, ctx: &PadicContext, k: i64) -> Result<ZetaEval> {
    match method {
        ZetaMethod::Haar => zeta_haar(i, s, ctx, k),
        ZetaMethod::Bernoulli => zeta_bernoulli(i, s, ctx, k),
        ZetaMethod::Washington => zeta_washington(i, s, ctx, k),
    }
}

/// `lim p^(−n) Σ_{m<p^n, p∤m} ω(m)^(1−i) ⟨m⟩^(1−s)`: `(s − 1) ζ_{p,i}(s)` up to the sign `(−1)^(i−1)`.
///
/// At `s = 1` this is `1 − 1/p` on branch 1 and `0` elsewhere.
pub fn inner_integral(i: i64, s: &PadicNumber, ctx: &PadicContext, k: i64) -> Result<ConvergenceReport> {
    check_argument(s)?;
    let p = ctx.prime();
    let e = pole_distance(s).unwrap_or(0);
    let t = PadicNumber::one(p, s.absolute_precision().max(1) as u32).sub_ref(s);
    let f = Integrand::unit_power(1 - i, t.lift_abs(k + e + 4));
    if t.is_zero() {
        // ⟨m⟩^0 = 1: the integrand is the character alone, summed exactly by class.
        let branch = ZetaBranch::new(i, p);
        let mut tracker = Tracker::new(k);
        let top = ctx.max_level();
        let w = (top as i64 + k + 2) as u32;
        class_power_sums(p, w, &num_bigint::BigUint::zero(), false, top, |sums| {
            let v = PadicNumber::from_residue(p, &twist(p, w, 1 - branch.index() as i64, &sums.plain), w as i64);
            tracker.push(sums.level, v.shift(-(sums.level as i64)), 0)
        });
        return Ok(tracker.finish());
    }
    volkenborn_riemann(&f, ctx, k)
}

/// Branches and arguments for [`zeta_consistency`].
#[derive(Clone, Debug)]
pub struct ZetaGrid {
    pub branches: Vec<i64>,
    pub s_values: Vec<Rational>,
}

impl ZetaGrid {
    /// All branches; `s ∈ {−3, −2, −1, 0, 2, 3, 1+p, 1+p²}`.
    pub fn default_for(p: u32) -> Self {
        let p = p as i64;
        ZetaGrid {
            branches: (0..p - 1).collect(),
            s_values: [-3, -2, -1, 0, 2, 3, 1 + p, 1 + p * p].into_iter().map(|s| Rational::from_integer(s.into())).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ZetaCell {
    pub branch: ZetaBranch,
    pub s: Rational,
    pub evals: Vec<(ZetaMethod, std::result::Result<ZetaEval, Error>)>,
    /// Smallest pairwise `v_p(difference)`; `None` if some route failed.
    pub agreement: Option<i64>,
}

impl ZetaCell {
    pub fn agrees(&self, k: i64) -> bool {
        self.agreement.is_some_and(|a| a >= k)
    }
}

/// Inner integral at `s = 1` for one branch.
#[derive(Clone, Debug)]
pub struct BranchDiagnostic {
    pub branch: ZetaBranch,
    pub inner: std::result::Result<PadicNumber, Error>,
    pub expected: PadicNumber,
}

impl BranchDiagnostic {
    pub fn ok(&self) -> bool {
        matches!(&self.inner, Ok(v) if v == &self.expected)
    }
}

/// `ζ_{p,i}(1 − n)` on `i ≡ 1 − n` against `−(1 − p^(n−1)) B_n / n`, and the unit moment
/// `∫_{Z_p^×} x^n = (1 − p^(n−1)) B_n`.
#[derive(Clone, Debug)]
pub struct SpecialValueCheck {
    pub n: usize,
    pub branch: ZetaBranch,
    pub expected: PadicNumber,
    pub evals: Vec<(ZetaMethod, std::result::Result<PadicNumber, Error>)>,
    pub moment_ok: bool,
}

impl SpecialValueCheck {
    pub fn ok(&self) -> bool {
        self.moment_ok && self.evals.iter().all(|(_, v)| matches!(v, Ok(v) if v == &self.expected))
    }
}

#[derive(Clone, Debug)]
pub struct ZetaAudit {
    pub prime: u32,
    pub precision: i64,
    pub cells: Vec<ZetaCell>,
    pub diagnostics: Vec<BranchDiagnostic>,
    pub special_values: Vec<SpecialValueCheck>,
}

impl ZetaAudit {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.agrees(self.precision))
            && self.diagnostics.iter().all(BranchDiagnostic::ok)
            && self.special_values.iter().all(SpecialValueCheck::ok)
    }
}

fn exact_s(s: &Rational, p: u32, k: i64) -> PadicNumber {
    PadicNumber::from_ratio_abs(s, p, k + 40)
}

/// Evaluates every requested route on one argument for several branches.
pub fn zeta_all_branches(
    branches: &[i64],
    s: &PadicNumber,
    methods: &[ZetaMethod],
    ctx: &PadicContext,
    k: i64,
) -> Result<Vec<(ZetaBranch, Vec<(ZetaMethod, std::result::Result<ZetaEval, Error>)>)>> {
    check_argument(s)?;
    let p = ctx.prime();
    let bs: Vec<ZetaBranch> = branches.iter().map(|&i| ZetaBranch::new(i, p)).collect();
    let haar = methods.contains(&ZetaMethod::Haar);
    let bern = methods.contains(&ZetaMethod::Bernoulli);
    let levels = level_routes(&bs, s, ctx, k, haar, bern);
    Ok(levels
        .into_iter()
        .map(|(b, h, bn)| {
            let mut evals = Vec::new();
            for m in methods {
                let r = match m {
                    ZetaMethod::Haar => h.clone().expect("requested"),
                    ZetaMethod::Bernoulli => bn.clone().expect("requested"),
                    ZetaMethod::Washington => zeta_washington(b.index() as i64, s, ctx, k),
                };
                evals.push((*m, r));
            }
            (b, evals)
        })
        .collect())
}

/// Smallest pairwise agreement of a set of evaluations, `None` if any failed.
pub fn pairwise_agreement(evals: &[(ZetaMethod, std::result::Result<ZetaEval, Error>)]) -> Option<i64> {
    let values: Vec<&PadicNumber> = evals.iter().map(|(_, r)| r.as_ref().ok().map(|e| &e.value)).collect::<Option<_>>()?;
    let mut best = i64::MAX;
    for (a, x) in values.iter().enumerate() {
        for y in &values[a + 1..] {
            best = best.min(x.agreement(y));
        }
    }
    Some(best)
}

/// Runs all three routes over `grid`, plus the pole and special-value diagnostics.
pub fn zeta_consistency(ctx: &PadicContext, grid: &ZetaGrid, k: i64) -> ZetaAudit {
    let p = ctx.prime();
    let mut cells = Vec::new();
    for s in &grid.s_values {
        let sp = exact_s(s, p, k);
        match zeta_all_branches(&grid.branches, &sp, &ZetaMethod::ALL, ctx, k) {
            Ok(rows) => {
                for (branch, evals) in rows {
                    let agreement = pairwise_agreement(&evals);
                    cells.push(ZetaCell { branch, s: s.clone(), evals, agreement });
                }
            }
            Err(err) => {
                for &i in &grid.branches {
                    let evals = ZetaMethod::ALL.iter().map(|m| (*m, Err(err.clone()))).collect();
                    cells.push(ZetaCell { branch: ZetaBranch::new(i, p), s: s.clone(), evals, agreement: None });
                }
            }
        }
    }

    let one = PadicNumber::one(p, (k + 40) as u32);
    let mut branches: Vec<ZetaBranch> = grid.branches.iter().map(|&i| ZetaBranch::new(i, p)).collect();
    branches.dedup();
    let diagnostics = branches
        .iter()
        .map(|&b| {
            let expected = if b.index() == 1 {
                PadicNumber::from_rational(p as i64 - 1, p as i64, p, (k + 1) as u32).unwrap().truncate_abs(k)
            } else {
                PadicNumber::zero(p, k)
            };
            let inner = inner_integral(b.index() as i64, &one, ctx, k).and_then(ConvergenceReport::into_result);
            BranchDiagnostic { branch: b, inner, expected }
        })
        .collect();

    let special_values = [2usize, 4, 6].into_iter().map(|n| special_value_check(n, ctx, k)).collect();
    ZetaAudit { prime: p, precision: k, cells, diagnostics, special_values }
}

/// `−(1 − p^(n−1)) B_n / n`.
pub fn special_value(n: usize, p: u32, k: i64) -> PadicNumber {
    let pr = Rational::from_integer(BigInt::from(p));
    let r = -(Rational::one() - pr.pow(n as i32 - 1)) * bernoulli_number(n) / Rational::from_integer(BigInt::from(n));
    PadicNumber::from_ratio_abs(&r, p, k)
}

pub fn special_value_check(n: usize, ctx: &PadicContext, k: i64) -> SpecialValueCheck {
    let p = ctx.prime();
    let i = 1 - n as i64;
    let s = exact_s(&Rational::from_integer(BigInt::from(i)), p, k);
    let expected = special_value(n, p, k);
    let evals = match zeta_all_branches(&[i], &s, &ZetaMethod::ALL, ctx, k) {
        Ok(mut rows) => rows.pop().expect("one branch").1.into_iter().map(|(m, r)| (m, r.map(|e| e.value))).collect(),
        Err(err) => ZetaMethod::ALL.iter().map(|m| (*m, Err(err.clone()))).collect(),
    };
    let pr = Rational::from_integer(BigInt::from(p));
    let moment = (Rational::one() - pr.pow(n as i32 - 1)) * bernoulli_number(n);
    let moment_ok = volkenborn_riemann(&Integrand::monomial(n).on_units(), ctx, k)
        .ok()
        .is_some_and(|r| r.converged && r.value == PadicNumber::from_ratio_abs(&moment, p, k));
    SpecialValueCheck { n, branch: ZetaBranch::new(i, p), expected, evals, moment_ok }
}
