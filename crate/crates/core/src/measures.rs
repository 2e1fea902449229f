//! Clopen subsets of `Z_p` and finitely additive measures on them.
//!
//! Every clopen set is a finite union of balls `a + p^n Z_p`, so a set is
//! stored as a residue set at one level. Measures hand out exact rational
//! ball values; the prime of the field those values are read in may differ
//! from the prime of the domain (the `q`-adic Haar measure).

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bernoulli::Rational;
use crate::error::{Error, Result};
use crate::padic::{is_prime, ratio_valuation, PadicContext, PadicNumber};

fn rat(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

fn pow_u64(p: u32, n: u32) -> Result<u64> {
    (p as u64).checked_pow(n).ok_or(Error::LevelTooDeep { level: n, limit: ilog(p, u64::MAX) })
}

/// The ball `residue + p^level Z_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClopenBall {
    pub prime: u32,
    pub level: u32,
    pub residue: u64,
}

impl ClopenBall {
    /// Reduces `residue` modulo `p^level`.
    pub fn new(prime: u32, level: u32, residue: u64) -> Result<Self> {
        let m = pow_u64(prime, level)?;
        Ok(ClopenBall { prime, level, residue: residue % m })
    }

    pub fn modulus(&self) -> u64 {
        (self.prime as u64).pow(self.level)
    }

    pub fn contains(&self, x: u64) -> bool {
        x % self.modulus() == self.residue
    }

    /// `true` when `other ⊆ self`.
    pub fn contains_ball(&self, other: &ClopenBall) -> bool {
        other.level >= self.level && self.contains(other.residue)
    }

    /// The `p` balls one level down.
    pub fn children(&self) -> impl Iterator<Item = ClopenBall> + '_ {
        let m = self.modulus();
        (0..self.prime as u64).map(move |j| ClopenBall {
            prime: self.prime,
            level: self.level + 1,
            residue: self.residue + j * m,
        })
    }

    /// Image under `x ↦ x/2`: `(a · 2⁻¹ mod p^n) + p^n Z_p`.
    pub fn halved(&self) -> ClopenBall {
        let m = self.modulus();
        let residue = if self.residue % 2 == 0 { self.residue / 2 } else { (self.residue + m) / 2 };
        ClopenBall { residue: residue % m.max(1), ..*self }
    }
}

impl fmt::Display for ClopenBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}^{}Z_{}", self.residue, self.prime, self.level, self.prime)
    }
}

/// A clopen subset of `Z_p`: the union of `r + p^level Z_p` over `r` in `residues`.
///
/// Sets carry a level cap; any operation that would need a deeper level fails
/// with [`Error::LevelTooDeep`] instead of allocating `p^level` residues.
#[derive(Clone, Debug)]
pub struct ClopenSet {
    prime: u32,
    level: u32,
    cap: u32,
    residues: BTreeSet<u64>,
}

impl PartialEq for ClopenSet {
    fn eq(&self, other: &Self) -> bool {
        if self.prime != other.prime {
            return false;
        }
        let level = self.level.max(other.level);
        match (self.at_level(level), other.at_level(level)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

impl ClopenSet {
    pub fn new(ctx: &PadicContext, level: u32, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::with_cap(ctx.prime(), level, ctx.level_cap(), residues)
    }

    pub fn with_cap(prime: u32, level: u32, cap: u32, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        if level > cap {
            return Err(Error::LevelTooDeep { level, limit: cap });
        }
        let m = pow_u64(prime, level)?;
        let residues = residues.into_iter().map(|r| r % m).collect();
        Ok(ClopenSet { prime, level, cap, residues })
    }

    pub fn empty(ctx: &PadicContext) -> Self {
        ClopenSet { prime: ctx.prime(), level: 0, cap: ctx.level_cap(), residues: BTreeSet::new() }
    }

    /// All of `Z_p`.
    pub fn full(ctx: &PadicContext) -> Self {
        ClopenSet { prime: ctx.prime(), level: 0, cap: ctx.level_cap(), residues: [0].into() }
    }

    /// `Z_p^×`, presented at level 1.
    pub fn units(ctx: &PadicContext) -> Self {
        let p = ctx.prime() as u64;
        ClopenSet { prime: ctx.prime(), level: 1, cap: ctx.level_cap().max(1), residues: (1..p).collect() }
    }

    pub fn ball(ctx: &PadicContext, ball: ClopenBall) -> Result<Self> {
        if ball.prime != ctx.prime() {
            return Err(Error::PrimeMismatch(ball.prime, ctx.prime()));
        }
        Self::new(ctx, ball.level, [ball.residue])
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn residues(&self) -> &BTreeSet<u64> {
        &self.residues
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.residues.contains(&(x % (self.prime as u64).pow(self.level)))
    }

    pub fn balls(&self) -> impl Iterator<Item = ClopenBall> + '_ {
        self.residues.iter().map(move |&residue| ClopenBall { prime: self.prime, level: self.level, residue })
    }

    fn at_level(&self, level: u32) -> Result<BTreeSet<u64>> {
        if level < self.level {
            return Err(Error::Domain(format!("cannot present a level-{} set at level {level}", self.level)));
        }
        if level > self.cap {
            return Err(Error::LevelTooDeep { level, limit: self.cap });
        }
        let m = pow_u64(self.prime, self.level)?;
        let count = pow_u64(self.prime, level - self.level)?;
        Ok(self.residues.iter().flat_map(|&r| (0..count).map(move |j| r + j * m)).collect())
    }

    /// The same set presented at a deeper `level`.
    pub fn refine(&self, level: u32) -> Result<Self> {
        Ok(ClopenSet { residues: self.at_level(level)?, level, ..*self })
    }

    /// Presentation at the smallest level where the set is a residue union.
    pub fn canonical(&self) -> Self {
        let mut cur = self.clone();
        while cur.level > 0 {
            let m = (cur.prime as u64).pow(cur.level - 1);
            let p = cur.prime as u64;
            let parents: BTreeSet<u64> = cur.residues.iter().map(|r| r % m).collect();
            if parents.len() as u64 * p != cur.residues.len() as u64 {
                break;
            }
            if !parents.iter().all(|&a| (0..p).all(|j| cur.residues.contains(&(a + j * m)))) {
                break;
            }
            cur = ClopenSet { residues: parents, level: cur.level - 1, ..cur };
        }
        if cur.residues.is_empty() {
            cur.level = 0;
        }
        cur
    }

    fn aligned(&self, other: &Self) -> Result<(u32, BTreeSet<u64>, BTreeSet<u64>)> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        let level = self.level.max(other.level);
        Ok((level, self.at_level(level)?, other.at_level(level)?))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        let (level, a, b) = self.aligned(other)?;
        Ok(ClopenSet { residues: &a | &b, level, ..*self })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        let (level, a, b) = self.aligned(other)?;
        Ok(ClopenSet { residues: &a & &b, level, ..*self })
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        let (level, a, b) = self.aligned(other)?;
        Ok(ClopenSet { residues: &a - &b, level, ..*self })
    }

    pub fn complement(&self) -> Self {
        let m = (self.prime as u64).pow(self.level);
        ClopenSet { residues: (0..m).filter(|r| !self.residues.contains(r)).collect(), ..self.clone() }
    }

    pub fn is_disjoint(&self, other: &Self) -> Result<bool> {
        Ok(self.intersection(other)?.is_empty())
    }
}

/// A finitely additive map from balls of `Z_p` to an exact field of values.
pub trait Measure {
    /// `p`, the prime of the domain `Z_p`.
    fn domain_prime(&self) -> u32;

    /// Prime of the field the values are read in.
    fn value_prime(&self) -> u32 {
        self.domain_prime()
    }

    fn ball_value(&self, ball: &ClopenBall) -> Result<Rational>;

    /// Whether `|μ(U)|` is bounded over all balls.
    fn is_bounded(&self) -> bool {
        true
    }

    /// Distributions that only make sense through limits of level sums.
    fn level_sum_only(&self) -> bool {
        false
    }

    /// Deepest level at which balls can be evaluated.
    fn max_level(&self) -> Option<u32> {
        None
    }

    fn name(&self) -> String;
}

fn check_ball(m: &(impl Measure + ?Sized), ball: &ClopenBall) -> Result<()> {
    if ball.prime != m.domain_prime() {
        return Err(Error::PrimeMismatch(ball.prime, m.domain_prime()));
    }
    if let Some(limit) = m.max_level() {
        if ball.level > limit {
            return Err(Error::LevelTooDeep { level: ball.level, limit });
        }
    }
    Ok(())
}

/// `μ₁(a + p^n Z_p) = a/p^n − 1/2`.
#[derive(Clone, Copy, Debug)]
pub struct BernoulliMu1 {
    pub prime: u32,
}

impl Measure for BernoulliMu1 {
    fn domain_prime(&self) -> u32 {
        self.prime
    }
    fn ball_value(&self, ball: &ClopenBall) -> Result<Rational> {
        check_ball(self, ball)?;
        Ok(Rational::new(BigInt::from(ball.residue), BigInt::from(ball.modulus())) - rat(1, 2))
    }
    fn is_bounded(&self) -> bool {
        false
    }
    fn name(&self) -> String {
        "bernoulli-mu1".into()
    }
}

/// The regularized Bernoulli measure `μ(U) = μ₁(U) − 2μ₁(U/2)`, equal to `(−1)^a / 2`.
#[derive(Clone, Copy, Debug)]
pub struct RegularizedBernoulli {
    pub prime: u32,
}

impl RegularizedBernoulli {
    /// The defining transform, evaluated through `μ₁` rather than by parity.
    pub fn via_mu1(&self, ball: &ClopenBall) -> Result<Rational> {
        let mu1 = BernoulliMu1 { prime: self.prime };
        Ok(mu1.ball_value(ball)? - rat(2, 1) * mu1.ball_value(&ball.halved())?)
    }
}

impl Measure for RegularizedBernoulli {
    fn domain_prime(&self) -> u32 {
        self.prime
    }
    fn ball_value(&self, ball: &ClopenBall) -> Result<Rational> {
        check_ball(self, ball)?;
        Ok(if ball.residue % 2 == 0 { rat(1, 2) } else { rat(-1, 2) })
    }
    fn name(&self) -> String {
        "regularized".into()
    }
}

/// Normalized counting measure on `Z_p` with values `1/p^n` read in `Q_q`, `q ≠ p`.
#[derive(Clone, Copy, Debug)]
pub struct QadicHaar {
    pub prime: u32,
    pub value_prime: u32,
}

impl QadicHaar {
    pub fn new(prime: u32, value_prime: u32) -> Result<Self> {
        for q in [prime, value_prime] {
            if q == 2 || !is_prime(q as u64) {
                return Err(Error::InvalidPrime(q as u64));
            }
        }
        if prime == value_prime {
            return Err(Error::UnboundedMeasure("p-adic Haar values in Q_p; use HaarDistribution".into()));
        }
        Ok(QadicHaar { prime, value_prime })
    }
}

impl Measure for QadicHaar {
    fn domain_prime(&self) -> u32 {
        self.prime
    }
    fn value_prime(&self) -> u32 {
        self.value_prime
    }
    fn ball_value(&self, ball: &ClopenBall) -> Result<Rational> {
        check_ball(self, ball)?;
        Ok(Rational::new(BigInt::one(), BigInt::from(ball.modulus())))
    }
    fn name(&self) -> String {
        format!("haar-q{}", self.value_prime)
    }
}

/// `1/p^n` on balls, read in `Q_p`: a distribution, not a bounded measure.
/// Only usable through the Volkenborn level sums of [`crate::integration`].
#[derive(Clone, Copy, Debug)]
pub struct HaarDistribution {
    pub prime: u32,
}

impl Measure for HaarDistribution {
    fn domain_prime(&self) -> u32 {
        self.prime
    }
    fn ball_value(&self, ball: &ClopenBall) -> Result<Rational> {
        check_ball(self, ball)?;
        Ok(Rational::new(BigInt::one(), BigInt::from(ball.modulus())))
    }
    fn is_bounded(&self) -> bool {
        false
    }
    fn level_sum_only(&self) -> bool {
        true
    }
    fn name(&self) -> String {
        "haar".into()
    }
}

/// A measure given by its values on the `p^N` balls of one level.
#[derive(Clone, Debug, PartialEq)]
pub struct TableMeasure {
    prime: u32,
    level: u32,
    table: Vec<Rational>,
}

impl TableMeasure {
    pub fn new(prime: u32, level: u32, table: Vec<Rational>) -> Result<Self> {
        if prime == 2 || !is_prime(prime as u64) {
            return Err(Error::InvalidPrime(prime as u64));
        }
        let m = pow_u64(prime, level)?;
        if table.len() as u64 != m {
            return Err(Error::Parse(format!("table has {} entries, expected {m}", table.len())));
        }
        Ok(TableMeasure { prime, level, table })
    }

    /// `ν_i = (−1)^i` on the residues of level `N`.
    pub fn alternating(prime: u32, level: u32) -> Result<Self> {
        let m = pow_u64(prime, level)?;
        Self::new(prime, level, (0..m).map(|i| if i % 2 == 0 { rat(1, 1) } else { rat(-1, 1) }).collect())
    }

    /// Counting measure `1/p^N` on every residue of level `N`.
    pub fn counting(prime: u32, level: u32) -> Result<Self> {
        let m = pow_u64(prime, level)?;
        Self::new(prime, level, vec![Rational::new(BigInt::one(), BigInt::from(m)); m as usize])
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }

    /// Parses the text format: a header `p N`, then lines `residue num/den`
    /// (or `residue num`). Blank lines and `#` comments are ignored; residues
    /// that never appear carry the value 0.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::Parse("missing header `p N`".into()))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let [p, n] = head[..] else {
            return Err(Error::Parse(format!("bad header {header:?}, expected `p N`")));
        };
        let prime: u32 = p.parse().map_err(|_| Error::Parse(format!("bad prime {p:?}")))?;
        let level: u32 = n.parse().map_err(|_| Error::Parse(format!("bad level {n:?}")))?;
        if prime == 2 || !is_prime(prime as u64) {
            return Err(Error::InvalidPrime(prime as u64));
        }
        let m = pow_u64(prime, level)?;
        if m > 1 << 24 {
            return Err(Error::LevelTooDeep { level, limit: ilog(prime, 1 << 24) });
        }
        let mut table = vec![Rational::zero(); m as usize];
        let mut seen = vec![false; m as usize];
        for (lineno, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [r, v] = fields[..] else {
                return Err(Error::Parse(format!("line {lineno}: expected `residue num/den`")));
            };
            let r: u64 = r.parse().map_err(|_| Error::Parse(format!("line {lineno}: bad residue {r:?}")))?;
            if r >= m {
                return Err(Error::Parse(format!("line {lineno}: residue {r} not below {m}")));
            }
            if seen[r as usize] {
                return Err(Error::Parse(format!("line {lineno}: duplicate residue {r}")));
            }
            seen[r as usize] = true;
            table[r as usize] = parse_rational(v).map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?;
        }
        Self::new(prime, level, table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Inverse of [`TableMeasure::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.prime, self.level);
        for (r, v) in self.table.iter().enumerate() {
            out.push_str(&format!("{r} {}/{}\n", v.numer(), v.denom()));
        }
        out
    }
}

fn ilog(p: u32, n: u64) -> u32 {
    let mut k = 0;
    let mut m = 1u64;
    while m <= n / p as u64 {
        m *= p as u64;
        k += 1;
    }
    k
}

/// Parses `a/b` or `a` into a reduced rational.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let a: BigInt = a.parse().map_err(|_| format!("bad numerator {a:?}"))?;
    let b: BigInt = b.parse().map_err(|_| format!("bad denominator {b:?}"))?;
    if b.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(a, b))
}

impl Measure for TableMeasure {
    fn domain_prime(&self) -> u32 {
        self.prime
    }
    fn ball_value(&self, ball: &ClopenBall) -> Result<Rational> {
        check_ball(self, ball)?;
        let step = ball.modulus() as usize;
        Ok(self.table.iter().skip(ball.residue as usize).step_by(step).sum())
    }
    fn max_level(&self) -> Option<u32> {
        Some(self.level)
    }
    fn name(&self) -> String {
        format!("table-{}", self.level)
    }
}

/// `μ(U)` read as an element of `Q_q` known to `O(q^abs)`.
pub fn ball_value_padic(m: &(impl Measure + ?Sized), ball: &ClopenBall, abs: i64) -> Result<PadicNumber> {
    Ok(PadicNumber::from_ratio_abs(&m.ball_value(ball)?, m.value_prime(), abs))
}

/// `μ(A)`, summed over the balls of the canonical presentation of `A`.
pub fn set_measure(m: &(impl Measure + ?Sized), set: &ClopenSet) -> Result<Rational> {
    if set.prime() != m.domain_prime() {
        return Err(Error::PrimeMismatch(set.prime(), m.domain_prime()));
    }
    set.canonical().balls().map(|b| m.ball_value(&b)).sum()
}

/// `‖A‖_μ` estimated from the balls of `A` at level `max(depth, level(A))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeminormEstimate {
    /// `‖A‖ = q^norm_exponent`, `None` for 0.
    pub norm_exponent: Option<i64>,
    pub depth: u32,
    /// All sub-ball values share one absolute value, so deeper levels cannot change the estimate.
    pub exact: bool,
}

impl SeminormEstimate {
    /// The norm as an exact rational `q^e`.
    pub fn value(&self, q: u32) -> Rational {
        match self.norm_exponent {
            None => Rational::zero(),
            Some(e) if e >= 0 => Rational::from_integer(BigInt::from(q).pow(e as u32)),
            Some(e) => Rational::new(BigInt::one(), BigInt::from(q).pow((-e) as u32)),
        }
    }
}

pub fn seminorm(m: &(impl Measure + ?Sized), set: &ClopenSet, depth: u32) -> Result<SeminormEstimate> {
    if m.level_sum_only() {
        return Err(Error::UnboundedMeasure(format!("{} has no seminorm", m.name())));
    }
    if set.is_empty() {
        return Ok(SeminormEstimate { norm_exponent: None, depth, exact: true });
    }
    let level = depth.max(set.level());
    let refined = set.refine(level)?;
    let q = m.value_prime();
    let mut best: Option<i64> = None;
    let mut values = BTreeSet::new();
    for ball in refined.balls() {
        let v = m.ball_value(&ball)?;
        let e = if v.is_zero() { None } else { Some(-ratio_valuation(&v, q)) };
        values.insert(e);
        if e > best {
            best = e;
        }
    }
    Ok(SeminormEstimate { norm_exponent: best, depth: level, exact: values.len() == 1 })
}

/// `N_μ(x)`: the seminorm of the depth-`d` ball around `x`.
pub fn norm_function(m: &(impl Measure + ?Sized), ctx: &PadicContext, x: u64, depth: u32) -> Result<SeminormEstimate> {
    let ball = ClopenBall::new(ctx.prime(), depth, x)?;
    seminorm(m, &ClopenSet::ball(ctx, ball)?, depth)
}

/// Outcome of checking `μ(a + p^n Z_p) = Σ_j μ(a + j p^n + p^(n+1) Z_p)` on one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivityReport {
    pub level: u32,
    pub balls_checked: u64,
    pub failures: Vec<u64>,
}

impl AdditivityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn additivity_check(m: &(impl Measure + ?Sized), level: u32) -> Result<AdditivityReport> {
    let p = m.domain_prime();
    let count = pow_u64(p, level)?;
    let mut failures = Vec::new();
    for a in 0..count {
        let ball = ClopenBall { prime: p, level, residue: a };
        let parent = m.ball_value(&ball)?;
        let children: Rational = ball.children().map(|c| m.ball_value(&c)).sum::<Result<Rational>>()?;
        if parent != children {
            failures.push(a);
        }
    }
    Ok(AdditivityReport { level, balls_checked: count, failures })
}

/// p-adic fractional part `{x}_p ∈ [0, 1) ∩ Z[1/p]`, with `x − {x}_p ∈ Z_p`.
pub fn fractional_part(x: &Rational, p: u32) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    let v = ratio_valuation(x, p);
    if v >= 0 {
        return Rational::zero();
    }
    let m = BigInt::from(p).pow((-v) as u32);
    // x = u / p^(-v) with u a p-adic unit rational; reduce u modulo p^(-v).
    let u = x * Rational::from_integer(m.clone());
    let (num, den) = (u.numer().clone(), u.denom().clone());
    let den_inv = den.extended_gcd(&m).x;
    let r = (num * den_inv).mod_floor(&m);
    debug_assert!(!r.is_negative());
    Rational::new(r, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32) -> PadicContext {
        PadicContext::new(p, 6, 8).unwrap()
    }

    fn ball(p: u32, level: u32, residue: u64) -> ClopenBall {
        ClopenBall::new(p, level, residue).unwrap()
    }

    #[test]
    fn regularized_ball_values() {
        let mu = RegularizedBernoulli { prime: 5 };
        assert_eq!(mu.ball_value(&ball(5, 2, 2)).unwrap(), rat(1, 2));
        assert_eq!(mu.ball_value(&ball(5, 2, 3)).unwrap(), rat(-1, 2));
    }

    #[test]
    fn mu1_ball_value() {
        assert_eq!(BernoulliMu1 { prime: 5 }.ball_value(&ball(5, 1, 2)).unwrap(), rat(-1, 10));
    }

    #[test]
    fn set_measure_examples() {
        let c = ctx(5);
        let mu = RegularizedBernoulli { prime: 5 };
        assert!(set_measure(&mu, &ClopenSet::empty(&c)).unwrap().is_zero());
        let full2 = ClopenSet::new(&c, 2, 0..25).unwrap();
        assert_eq!(set_measure(&mu, &full2).unwrap(), rat(1, 2));
        // Summing at level 2 without canonicalizing gives the same value.
        let direct: Rational = full2.balls().map(|b| mu.ball_value(&b).unwrap()).sum();
        assert_eq!(direct, rat(1, 2));
        let haar = QadicHaar::new(5, 3).unwrap();
        assert_eq!(set_measure(&haar, &ClopenSet::units(&c)).unwrap(), rat(4, 5));
    }

    #[test]
    fn seminorm_examples() {
        let c = ctx(5);
        let mu = RegularizedBernoulli { prime: 5 };
        let a = ClopenSet::new(&c, 2, [3, 7, 11]).unwrap();
        let s = seminorm(&mu, &a, 4).unwrap();
        assert_eq!(s.norm_exponent, Some(0));
        assert!(s.exact);
        let s = seminorm(&BernoulliMu1 { prime: 5 }, &ClopenSet::full(&c), 1).unwrap();
        assert_eq!(s.norm_exponent, Some(1));
        assert_eq!(s.value(5), rat(5, 1));
        assert!(!s.exact);
        let s = seminorm(&mu, &ClopenSet::empty(&c), 3).unwrap();
        assert_eq!(s.norm_exponent, None);
        assert!(seminorm(&HaarDistribution { prime: 5 }, &ClopenSet::full(&c), 1).is_err());
    }

    #[test]
    fn mu1_seminorm_grows_with_depth() {
        let c = ctx(3);
        let mu1 = BernoulliMu1 { prime: 3 };
        let full = ClopenSet::full(&c);
        let norms: Vec<_> = (0..5).map(|d| seminorm(&mu1, &full, d).unwrap().norm_exponent).collect();
        assert!(norms.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(norms[4], Some(4));
    }

    #[test]
    fn additivity_examples() {
        for n in 0..4 {
            assert!(additivity_check(&RegularizedBernoulli { prime: 7 }, n).unwrap().passed());
        }
        assert!(additivity_check(&BernoulliMu1 { prime: 5 }, 1).unwrap().passed());
        let nu = TableMeasure::alternating(3, 4).unwrap();
        for n in 0..4 {
            assert!(additivity_check(&nu, n).unwrap().passed());
            for a in 0..3u64.pow(n) {
                let expect = if a % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
                assert_eq!(nu.ball_value(&ball(3, n, a)).unwrap(), expect);
            }
        }
        assert!(additivity_check(&nu, 4).is_err());
    }

    #[test]
    fn additivity_detects_a_broken_measure() {
        struct Broken;
        impl Measure for Broken {
            fn domain_prime(&self) -> u32 {
                3
            }
            fn ball_value(&self, b: &ClopenBall) -> Result<Rational> {
                Ok(rat(b.level as i64, 1))
            }
            fn name(&self) -> String {
                "broken".into()
            }
        }
        let r = additivity_check(&Broken, 1).unwrap();
        assert_eq!(r.failures, vec![0, 1, 2]);
    }

    #[test]
    fn regularization_matches_parity() {
        for p in [3u32, 5, 7] {
            let mu = RegularizedBernoulli { prime: p };
            for n in 0..=3 {
                for a in 0..(p as u64).pow(n) {
                    let b = ball(p, n, a);
                    assert_eq!(mu.via_mu1(&b).unwrap(), mu.ball_value(&b).unwrap());
                }
            }
        }
    }

    #[test]
    fn fractional_part_identity() {
        for p in [3u32, 5, 7, 11] {
            for n in 1..6u32 {
                let pn = BigInt::from(p).pow(n);
                let x = Rational::new(BigInt::one(), BigInt::from(2) * &pn);
                let lhs = rat(2, 1) * fractional_part(&x, p);
                let rhs = Rational::new(BigInt::one(), pn) + rat(1, 1);
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(fractional_part(&rat(7, 3), 3), rat(1, 3));
        assert_eq!(fractional_part(&rat(-1, 3), 3), rat(2, 3));
        assert!(fractional_part(&rat(1, 2), 3).is_zero());
    }

    #[test]
    fn clopen_algebra() {
        let c = ctx(3);
        let a = ClopenSet::new(&c, 1, [1]).unwrap();
        let b = ClopenSet::new(&c, 2, [1, 4, 7]).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.canonical().level(), 1);
        let u = ClopenSet::units(&c);
        assert_eq!(u.complement(), ClopenSet::new(&c, 1, [0]).unwrap());
        assert_eq!(u.union(&u.complement()).unwrap().canonical(), ClopenSet::full(&c));
        assert!(u.intersection(&u.complement()).unwrap().is_empty());
        let deep = ClopenSet::new(&c, 2, [5]).unwrap();
        assert_eq!(u.difference(&deep).unwrap().residues().len(), 5);
        assert!(matches!(a.refine(9), Err(Error::LevelTooDeep { .. })));
        assert!(ClopenSet::new(&c, 9, [0]).is_err());
    }

    #[test]
    fn table_round_trip() {
        let text = "# alternating\n3 2\n0 1/1\n1 -1\n2 1/1\n3 -1/1\n4 1\n5 -1\n6 1\n7 -1\n8 1/1\n";
        let t = TableMeasure::parse(text).unwrap();
        assert_eq!(t, TableMeasure::alternating(3, 2).unwrap());
        assert_eq!(TableMeasure::parse(&t.to_text()).unwrap(), t);
        let sparse = TableMeasure::parse("5 1\n2 3/7\n").unwrap();
        assert_eq!(sparse.ball_value(&ball(5, 0, 0)).unwrap(), rat(3, 7));
        assert!(sparse.ball_value(&ball(5, 2, 0)).is_err());
    }

    #[test]
    fn table_parse_errors() {
        for bad in ["", "4 1\n", "5\n", "5 1\n7 1/2\n", "5 1\n1 1/0\n", "5 1\n1 1\n1 2\n", "5 1\n1 x\n"] {
            assert!(TableMeasure::parse(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn counting_table_is_haar_at_level() {
        let t = TableMeasure::counting(5, 3).unwrap();
        let h = HaarDistribution { prime: 5 };
        for n in 0..=3 {
            for a in 0..5u64.pow(n) {
                let b = ball(5, n, a);
                assert_eq!(t.ball_value(&b).unwrap(), h.ball_value(&b).unwrap());
            }
        }
    }

    #[test]
    fn qadic_haar_values() {
        let h = QadicHaar::new(5, 3).unwrap();
        let v = ball_value_padic(&h, &ball(5, 3, 17), 6).unwrap();
        assert_eq!(v.prime(), 3);
        assert_eq!(v.valuation(), 0);
        assert_eq!(v, PadicNumber::from_rational(1, 125, 3, 6).unwrap());
        assert!(QadicHaar::new(5, 5).is_err());
    }
}
