//! Level-sum integration against measures, Volkenborn integrals and Mahler expansions.
//!
//! An integral over `Z_p` is the limit of its level-`n` Riemann sums. None of
//! the integrands here come with a proven convergence rate, so every routine
//! iterates levels until two consecutive differences vanish to the target
//! precision and reports whether that happened.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bernoulli::{binomial, Rational};
use crate::error::{Error, Result};
use crate::measures::{ClopenBall, Measure};
use crate::padic::{ilog_p, one_unit_power, unit_decompose, PadicContext, PadicNumber, PowerMethod};

/// Where an integrand lives: all of `Z_p`, or `Z_p^×` (zero on `pZ_p`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Full,
    Units,
}

type EvalFn = dyn Fn(u64, u32, i64) -> PadicNumber + Send + Sync;

#[derive(Clone)]
enum Repr {
    /// Exact rational coefficients `c_0 + c_1 x + …`.
    Polynomial(Vec<Rational>),
    /// `f(a, q, abs)`: the value at `a` in `Q_q`, known to `O(q^abs)`.
    Function(Arc<EvalFn>),
}

/// A continuous function on `Z_p`, known through its values at non-negative integers.
#[derive(Clone)]
pub struct Integrand {
    repr: Repr,
    domain: Domain,
    c1: bool,
    continuity: Option<Arc<dyn Fn(u32) -> i64 + Send + Sync>>,
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let repr = match &self.repr {
            Repr::Polynomial(c) => format!("Polynomial(degree {})", c.len().saturating_sub(1)),
            Repr::Function(_) => "Function".to_string(),
        };
        f.debug_struct("Integrand").field("repr", &repr).field("domain", &self.domain).field("c1", &self.c1).finish()
    }
}

impl Integrand {
    /// Polynomials are `C¹`.
    pub fn polynomial(coeffs: Vec<Rational>) -> Self {
        Integrand { repr: Repr::Polynomial(coeffs), domain: Domain::Full, c1: true, continuity: None }
    }

    pub fn monomial(n: usize) -> Self {
        let mut c = vec![Rational::zero(); n + 1];
        c[n] = Rational::one();
        Self::polynomial(c)
    }

    pub fn constant(c: Rational) -> Self {
        Self::polynomial(vec![c])
    }

    /// A black-box function; mark it with [`Integrand::with_c1`] to allow Volkenborn integration.
    pub fn function(f: impl Fn(u64, u32, i64) -> PadicNumber + Send + Sync + 'static) -> Self {
        Integrand { repr: Repr::Function(Arc::new(f)), domain: Domain::Full, c1: false, continuity: None }
    }

    /// Characteristic function of a ball; exactly constant on balls of its level and below.
    pub fn indicator(ball: ClopenBall) -> Self {
        let level = ball.level;
        Self::function(move |a, q, abs| {
            if ball.contains(a) {
                PadicNumber::one(q, abs.max(1) as u32)
            } else {
                PadicNumber::zero(q, abs)
            }
        })
        .with_continuity(move |l| if l >= level { i64::MAX } else { 0 })
    }

    /// `x ↦ ω(x)^e ⟨x⟩^t` on `Z_p^×`, for `t ∈ Z_p`.
    pub fn unit_power(e: i64, t: PadicNumber) -> Self {
        let p = t.prime();
        let order = p as i64 - 1;
        let e = e.rem_euclid(order) as u64;
        Self::function(move |a, q, abs| {
            debug_assert_eq!(q, p);
            let x = PadicNumber::from_int(p, a as i64, abs.max(1) as u32);
            let d = unit_decompose(&x).expect("unit argument");
            let pw = one_unit_power(&d.one_unit, &t, PowerMethod::ExpLog).expect("t in Z_p");
            d.teichmuller.pow(e).mul_ref(&pw)
        })
        .on_units()
        .with_c1()
    }

    pub fn on_units(mut self) -> Self {
        self.domain = Domain::Units;
        self
    }

    /// Asserts the integrand is `C¹`.
    pub fn with_c1(mut self) -> Self {
        self.c1 = true;
        self
    }

    /// Hint: inputs congruent mod `p^ℓ` give outputs agreeing mod `p^hint(ℓ)`.
    pub fn with_continuity(mut self, hint: impl Fn(u32) -> i64 + Send + Sync + 'static) -> Self {
        self.continuity = Some(Arc::new(hint));
        self
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn is_c1(&self) -> bool {
        self.c1
    }

    pub fn continuity(&self, level: u32) -> Option<i64> {
        self.continuity.as_ref().map(|h| h(level))
    }

    /// Whether level sums at `level` may be trusted to `O(p^k)`: without a hint, always;
    /// with one, only once the hint reaches `k`. Stops the level iteration from
    /// settling on equal sums that merely have not yet seen the function vary.
    fn resolved(&self, level: u32, k: i64) -> bool {
        self.continuity(level).is_none_or(|h| h >= k)
    }

    pub fn coefficients(&self) -> Option<&[Rational]> {
        match &self.repr {
            Repr::Polynomial(c) => Some(c),
            Repr::Function(_) => None,
        }
    }

    fn exact_value(coeffs: &[Rational], a: u64) -> Rational {
        let x = Rational::from_integer(BigInt::from(a));
        coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * &x + c)
    }

    /// `f(a)` in `Q_q` to `O(q^abs)`; `p` is the domain prime used for the unit restriction.
    pub fn eval(&self, a: u64, p: u32, q: u32, abs: i64) -> PadicNumber {
        if self.domain == Domain::Units && a % p as u64 == 0 {
            return PadicNumber::zero(q, abs);
        }
        match &self.repr {
            Repr::Polynomial(c) => PadicNumber::from_ratio_abs(&Self::exact_value(c, a), q, abs),
            Repr::Function(f) => f(a, q, abs),
        }
    }
}

/// Result of a level-sum iteration.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub value: PadicNumber,
    /// Deepest level summed.
    pub levels: u32,
    /// `deltas[j] = v(S_{n_j} − S_{n_j − 1})` for the levels after the first.
    pub deltas: Vec<i64>,
    pub converged: bool,
    /// Number of integrand evaluations (0 for closed-form level sums).
    pub evaluations: u64,
}

impl ConvergenceReport {
    /// The converged value, or an error naming the shortfall.
    pub fn into_result(self) -> Result<PadicNumber> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NotSummable(format!(
                "no convergence within level {} (deltas {:?})",
                self.levels, self.deltas
            )))
        }
    }
}

/// Tracks successive level sums and applies the two-small-deltas stopping rule.
pub(crate) struct Tracker {
    target: i64,
    prev: Option<PadicNumber>,
    deltas: Vec<i64>,
    last_level: u32,
    evaluations: u64,
}

impl Tracker {
    pub(crate) fn new(target: i64) -> Self {
        Tracker { target, prev: None, deltas: Vec::new(), last_level: 0, evaluations: 0 }
    }

    /// Records `S_level`; returns `true` once two consecutive deltas reach the target.
    pub(crate) fn push(&mut self, level: u32, value: PadicNumber, evaluations: u64) -> bool {
        self.evaluations += evaluations;
        self.last_level = level;
        if let Some(prev) = &self.prev {
            self.deltas.push(value.sub_ref(prev).valuation());
        }
        self.prev = Some(value);
        self.done()
    }

    fn done(&self) -> bool {
        self.deltas.len() >= 2 && self.deltas[self.deltas.len() - 2..].iter().all(|&d| d >= self.target)
    }

    pub(crate) fn finish(self) -> ConvergenceReport {
        let converged = self.done();
        let value = self.prev.expect("at least one level").truncate_abs(self.target);
        ConvergenceReport {
            value,
            levels: self.last_level,
            deltas: self.deltas,
            converged,
            evaluations: self.evaluations,
        }
    }
}

/// `∫ f dμ` as the limit of `Σ_{a < p^n} f(a) μ(a + p^n Z_p)`, to `O(q^k)`.
pub fn riemann_integral(f: &Integrand, m: &(impl Measure + ?Sized), ctx: &PadicContext, k: i64) -> Result<ConvergenceReport> {
    if m.level_sum_only() {
        return Err(Error::UnboundedMeasure(format!("{} needs volkenborn_riemann", m.name())));
    }
    let p = ctx.prime();
    if m.domain_prime() != p {
        return Err(Error::PrimeMismatch(m.domain_prime(), p));
    }
    let q = m.value_prime();
    let start = if f.domain() == Domain::Units { 1 } else { 0 };
    let top = m.max_level().map_or(ctx.max_level(), |l| l.min(ctx.max_level())).max(start);
    let mut tracker = Tracker::new(k);
    for n in start..=top {
        let modulus = (p as u64).pow(n);
        let mut sum = PadicNumber::zero(q, k + 2);
        let mut evals = 0;
        for a in 0..modulus {
            if f.domain() == Domain::Units && a % p as u64 == 0 {
                continue;
            }
            let ball = ClopenBall { prime: p, level: n, residue: a };
            let w = m.ball_value(&ball)?;
            if w.is_zero() {
                continue;
            }
            let guard = -crate::padic::ratio_valuation(&w, q).min(0);
            let term = f.eval(a, p, q, k + 2 + guard).mul_ratio(&w);
            sum = sum.add_ref(&term);
            evals += 1;
        }
        if tracker.push(n, sum, evals) && f.resolved(n, k) {
            break;
        }
    }
    let mut report = tracker.finish();
    report.converged &= f.resolved(report.levels, k);
    Ok(report)
}

/// `P_n(e) = Σ_{b < p^n} b^e` for `e = 0..=d` and every `n ≤ levels`, via the digit split
/// `a = c p^(n-1) + b`.
fn power_sum_table(p: u32, d: usize, levels: u32) -> Vec<Vec<BigInt>> {
    let digit_sums: Vec<BigInt> =
        (0..=d).map(|j| (0..p).map(|c| if j == 0 { BigInt::one() } else { BigInt::from(c).pow(j as u32) }).sum()).collect();
    let mut table = vec![(0..=d).map(|e| if e == 0 { BigInt::one() } else { BigInt::zero() }).collect::<Vec<_>>()];
    let pb = BigInt::from(p);
    for n in 1..=levels {
        let prev = &table[n as usize - 1];
        let shift = pb.pow(n - 1);
        let row = (0..=d)
            .map(|dd| {
                let mut acc = BigInt::zero();
                let mut shift_pow = BigInt::one();
                // e = dd - j runs downward as the power of the shifted digit grows.
                for j in 0..=dd {
                    let e = dd - j;
                    acc += binomial(dd as u64, e as u64) * &shift_pow * &digit_sums[j] * &prev[e];
                    shift_pow *= &shift;
                }
                acc
            })
            .collect();
        table.push(row);
    }
    table
}

/// Volkenborn integral `lim p^(-n) Σ_{a<p^n} f(a)` to `O(p^k)`.
///
/// Polynomial integrands are summed exactly through power sums, so deep levels cost
/// nothing; other integrands are enumerated up to `ctx.max_level()`.
pub fn volkenborn_riemann(f: &Integrand, ctx: &PadicContext, k: i64) -> Result<ConvergenceReport> {
    if !f.is_c1() {
        return Err(Error::NotC1);
    }
    let p = ctx.prime();
    let mut tracker = Tracker::new(k);
    match &f.repr {
        Repr::Polynomial(coeffs) => {
            let top = ctx.level_cap();
            let d = coeffs.len().saturating_sub(1);
            let sums = power_sum_table(p, d, top);
            let pb = BigInt::from(p);
            for n in 1..=top {
                let mut total = Rational::zero();
                for (e, c) in coeffs.iter().enumerate() {
                    let mut s = sums[n as usize][e].clone();
                    if f.domain() == Domain::Units {
                        s -= pb.pow(e as u32) * &sums[n as usize - 1][e];
                    }
                    total += c * Rational::from_integer(s);
                }
                let level_sum = total / Rational::from_integer(pb.pow(n));
                if tracker.push(n, PadicNumber::from_ratio_abs(&level_sum, p, k + 2), 0) {
                    break;
                }
            }
        }
        Repr::Function(_) => {
            for n in 1..=ctx.max_level() {
                let modulus = (p as u64).pow(n);
                let work = k + 2 + n as i64;
                let mut sum = PadicNumber::zero(p, work);
                for a in 0..modulus {
                    sum = sum.add_ref(&f.eval(a, p, p, work));
                }
                if tracker.push(n, sum.shift(-(n as i64)), modulus) && f.resolved(n, k) {
                    break;
                }
            }
        }
    }
    let mut report = tracker.finish();
    report.converged &= f.resolved(report.levels, k);
    Ok(report)
}

/// Mahler coefficients `a_n = Σ_i (−1)^(n−i) C(n,i) f(i)`, `n < count`, each known to `O(p^k)`
/// after the division by `n + 1` in the Volkenborn sum.
///
/// Computed by repeated forward differences in place, never by expanding the binomials.
pub fn mahler_coefficients(f: &Integrand, ctx: &PadicContext, count: usize, k: i64) -> Vec<PadicNumber> {
    let p = ctx.prime();
    let work = k + ilog_p(count.max(1) as u64, p as u64) as i64 + 1;
    match &f.repr {
        Repr::Polynomial(c) => {
            let mut v: Vec<Rational> = (0..count as u64)
                .map(|i| {
                    if f.domain() == Domain::Units && i % p as u64 == 0 {
                        Rational::zero()
                    } else {
                        Integrand::exact_value(c, i)
                    }
                })
                .collect();
            forward_differences(&mut v, |a, b| a - b);
            v.iter().map(|r| PadicNumber::from_ratio_abs(r, p, work)).collect()
        }
        Repr::Function(_) => {
            let mut v: Vec<PadicNumber> = (0..count as u64).map(|i| f.eval(i, p, p, work)).collect();
            forward_differences(&mut v, |a, b| a.sub_ref(b));
            v
        }
    }
}

fn forward_differences<T>(v: &mut [T], sub: impl Fn(&T, &T) -> T) {
    for n in 1..v.len() {
        for i in (n..v.len()).rev() {
            v[i] = sub(&v[i], &v[i - 1]);
        }
    }
}

/// `∫_{Z_p} f = Σ_n (−1)^n a_n / (n + 1)` to `O(p^k)`.
///
/// The last half of the window must already lie below `p^k`; otherwise the
/// coefficients give no evidence of convergence and the sum is refused.
pub fn volkenborn_mahler(coeffs: &[PadicNumber], k: i64) -> Result<PadicNumber> {
    let n = coeffs.len();
    if n < 2 {
        return Err(Error::NotSummable("window needs at least two coefficients".into()));
    }
    let p = coeffs[0].prime();
    let terms: Vec<PadicNumber> = coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let t = a.div_i64(i as i64 + 1).expect("n + 1 ≠ 0");
            if i % 2 == 1 {
                t.neg_ref()
            } else {
                t
            }
        })
        .collect();
    if let Some((i, t)) = terms.iter().enumerate().skip(n - n / 2).find(|(_, t)| t.valuation() < k) {
        return Err(Error::NotSummable(format!("term {i} has valuation {} < {k}", t.valuation())));
    }
    let sum = terms.iter().fold(PadicNumber::zero(p, k), |acc, t| acc.add_ref(t));
    if sum.absolute_precision() < k {
        return Err(Error::InsufficientPrecision(format!(
            "coefficients known only to O(p^{})",
            sum.absolute_precision()
        )));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernoulli::{bernoulli_number, unit_moment};
    use crate::measures::{QadicHaar, RegularizedBernoulli, TableMeasure};

    fn rat(a: i64, b: i64) -> Rational {
        Rational::new(BigInt::from(a), BigInt::from(b))
    }

    fn ctx(p: u32) -> PadicContext {
        PadicContext::new(p, 8, 30).unwrap().with_residue_budget(100_000)
    }

    #[test]
    fn power_sum_table_matches_enumeration() {
        let t = power_sum_table(3, 5, 4);
        for n in 0..=4u32 {
            for e in 0..=5u32 {
                let direct: BigInt = (0..3u64.pow(n)).map(|b| BigInt::from(b).pow(e)).sum();
                assert_eq!(t[n as usize][e as usize], direct, "n={n} e={e}");
            }
        }
    }

    #[test]
    fn volkenborn_moments() {
        let c = ctx(5);
        for (n, expect) in [(0usize, rat(1, 1)), (1, rat(-1, 2)), (2, rat(1, 6))] {
            let r = volkenborn_riemann(&Integrand::monomial(n), &c, 8).unwrap();
            assert!(r.converged);
            assert_eq!(r.value, PadicNumber::from_ratio_abs(&expect, 5, 8));
        }
        let seven = Integrand::constant(rat(7, 1));
        assert_eq!(volkenborn_riemann(&seven, &c, 8).unwrap().value, PadicNumber::from_int(5, 7, 8));
    }

    #[test]
    fn polynomial_route_equals_enumeration() {
        let c = ctx(3);
        let poly = Integrand::polynomial(vec![rat(1, 1), rat(-2, 1), rat(0, 1), rat(5, 3)]);
        let coeffs = poly.coefficients().unwrap().to_vec();
        let black_box = Integrand::function(move |a, q, abs| {
            PadicNumber::from_ratio_abs(&Integrand::exact_value(&coeffs, a), q, abs)
        })
        .with_c1();
        let a = volkenborn_riemann(&poly, &c, 5).unwrap();
        let b = volkenborn_riemann(&black_box, &c, 5).unwrap();
        assert!(a.converged && b.converged);
        assert_eq!(a.value, b.value);
        assert!(b.evaluations > 0);
    }

    #[test]
    fn black_box_requires_c1() {
        let f = Integrand::function(|_, q, abs| PadicNumber::one(q, abs as u32));
        assert_eq!(volkenborn_riemann(&f, &ctx(3), 4).unwrap_err(), Error::NotC1);
    }

    #[test]
    fn unit_restricted_moments() {
        for p in [3u32, 5, 7] {
            let c = ctx(p);
            for n in 0..=8usize {
                let r = volkenborn_riemann(&Integrand::monomial(n).on_units(), &c, 4).unwrap();
                let factor = Rational::one() - Rational::new(BigInt::from(p).pow(n as u32), BigInt::from(p));
                let expect = PadicNumber::from_ratio_abs(&(factor * bernoulli_number(n)), p, 4);
                assert_eq!(r.value, expect, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn twisted_unit_moment_by_enumeration() {
        let c = PadicContext::new(5, 4, 8).unwrap();
        for j in [1usize, 2, 3, 4] {
            let t = PadicNumber::from_int(5, j as i64, 8);
            let f = Integrand::unit_power(0, t);
            // ω(x)^(-j) x^j = ⟨x⟩^j.
            let r = volkenborn_riemann(&f, &c, 3).unwrap();
            assert!(r.converged, "j={j}: {:?}", r.deltas);
            assert_eq!(r.value, unit_moment(j, &c, 3), "j={j}");
        }
    }

    #[test]
    fn mahler_examples() {
        let c = ctx(5);
        let one = mahler_coefficients(&Integrand::constant(rat(1, 1)), &c, 6, 6);
        assert_eq!(one[0], PadicNumber::one(5, 6));
        assert!(one[1..].iter().all(|a| a.is_zero()));
        let x = mahler_coefficients(&Integrand::monomial(1), &c, 6, 6);
        assert!(x[0].is_zero() && x[1] == PadicNumber::one(5, 6) && x[2..].iter().all(|a| a.is_zero()));
        let sq = mahler_coefficients(&Integrand::monomial(2), &c, 6, 6);
        assert_eq!(sq[1], PadicNumber::one(5, 6));
        assert_eq!(sq[2], PadicNumber::from_int(5, 2, 6));
        assert!(sq[3..].iter().all(|a| a.is_zero()));
        assert_eq!(volkenborn_mahler(&one, 6).unwrap(), PadicNumber::one(5, 6));
        assert_eq!(volkenborn_mahler(&x, 6).unwrap(), PadicNumber::from_rational(-1, 2, 5, 6).unwrap());
        assert_eq!(volkenborn_mahler(&sq, 6).unwrap(), PadicNumber::from_rational(1, 6, 5, 6).unwrap());
    }

    #[test]
    fn mahler_rejects_slow_tails() {
        let c = ctx(3);
        // 1/(x+1)-like growth: f(i) = (-1)^i has a_n = (-2)^n, no decay.
        let f = Integrand::function(|a, q, abs| PadicNumber::from_int(q, if a % 2 == 0 { 1 } else { -1 }, abs as u32));
        let a = mahler_coefficients(&f, &c, 12, 4);
        assert!(matches!(volkenborn_mahler(&a, 4), Err(Error::NotSummable(_))));
        assert!(volkenborn_mahler(&a[..1], 4).is_err());
    }

    #[test]
    fn mahler_and_riemann_agree_on_unit_powers() {
        let c = PadicContext::new(5, 4, 8).unwrap();
        let f = Integrand::unit_power(1, PadicNumber::from_rational(-1, 3, 5, 8).unwrap());
        let riemann = volkenborn_riemann(&f, &c, 3).unwrap();
        assert!(riemann.converged);
        let mahler = volkenborn_mahler(&mahler_coefficients(&f, &c, 60, 3), 3).unwrap();
        assert_eq!(riemann.value, mahler);
    }

    #[test]
    fn riemann_examples() {
        let c = ctx(5);
        let mu = RegularizedBernoulli { prime: 5 };
        let r = riemann_integral(&Integrand::constant(rat(1, 1)), &mu, &c, 6).unwrap();
        assert!(r.converged);
        assert_eq!(r.value, PadicNumber::from_rational(1, 2, 5, 6).unwrap());

        let haar = QadicHaar::new(5, 3).unwrap();
        let r = riemann_integral(&Integrand::constant(rat(1, 1)).on_units(), &haar, &c, 6).unwrap();
        assert_eq!(r.value, PadicNumber::from_rational(4, 5, 3, 6).unwrap());

        let ball = ClopenBall::new(5, 2, 7).unwrap();
        let r = riemann_integral(&Integrand::indicator(ball), &haar, &c, 6).unwrap();
        assert!(r.converged);
        assert_eq!(r.value, PadicNumber::from_rational(1, 25, 3, 6).unwrap());
    }

    #[test]
    fn indicator_waits_for_its_own_level() {
        // Sums over residues below 25 never meet the ball 100 + 125Z_5, so they are all 0.
        let c = ctx(5);
        let ball = ClopenBall::new(5, 3, 100).unwrap();
        let haar = QadicHaar::new(5, 3).unwrap();
        let r = riemann_integral(&Integrand::indicator(ball), &haar, &c, 6).unwrap();
        assert!(r.converged && r.levels >= 3);
        assert_eq!(r.value, PadicNumber::from_rational(1, 125, 3, 6).unwrap());

        let v = volkenborn_riemann(&Integrand::indicator(ball).with_c1(), &c, 4).unwrap();
        assert!(v.converged);
        assert_eq!(v.value, PadicNumber::from_rational(1, 125, 5, 8).unwrap().truncate_abs(4));

        let shallow = PadicContext::new(5, 6, 2).unwrap();
        let r = riemann_integral(&Integrand::indicator(ball), &haar, &shallow, 6).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn riemann_rejects_distributions() {
        let c = ctx(5);
        let h = crate::measures::HaarDistribution { prime: 5 };
        assert!(riemann_integral(&Integrand::monomial(1), &h, &c, 4).is_err());
    }

    #[test]
    fn riemann_against_a_table_stops_at_its_level() {
        let c = ctx(3);
        let nu = TableMeasure::alternating(3, 3).unwrap();
        let r = riemann_integral(&Integrand::constant(rat(1, 1)), &nu, &c, 4).unwrap();
        assert!(r.levels <= 3);
        assert_eq!(r.value, PadicNumber::one(3, 4));
    }

    #[test]
    fn regularized_deltas_grow_linearly() {
        // f(x) = x is 1-Lipschitz, so consecutive sums differ by roughly p^(-n).
        let c = PadicContext::new(3, 8, 9).unwrap();
        let mu = RegularizedBernoulli { prime: 3 };
        let r = riemann_integral(&Integrand::monomial(1), &mu, &c, 7).unwrap();
        for (j, d) in r.deltas.iter().enumerate() {
            assert!(*d >= j as i64 + 1 - 2, "{:?}", r.deltas);
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        let c = PadicContext::new(3, 8, 3).unwrap();
        let r = volkenborn_riemann(&Integrand::monomial(4), &c, 8).unwrap();
        assert!(!r.converged);
        assert!(r.into_result().is_err());
    }
}
