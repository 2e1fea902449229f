//! The p-adic Euler–Mascheroni constant `γ_p`, the constant term of `ζ_{p,1}` at `s = 1`.
//!
//! Five formulas, each computed independently:
//!
//! | method | form | cost |
//! |---|---|---|
//! | A | `−q⁻¹(q⁻¹ Σ_{m<q, p∤m} ⟨m⟩^q − (1 − 1/p))`, `q = p^n` | level sum |
//! | B | `(Γ_p(q + 1) + 1)/q`; B′: `−q⁻¹ log_p Π_{m<q, p∤m} m` | level product |
//! | C | `−Σ_{n≥1} n⁻¹ Σ_j C(n,j) (−1)^(j+1) M_j` with unit moments `M_j` | closed form |
//! | D | regularized-measure sum divided by `1 − ⟨2⟩^q` | level sum |
//! | E | `p⁻¹ Σ_{a=1}^{p−1} (−log_p⟨a⟩ + Σ_j ((−1)^j/j) B_j (p/a)^j)` | closed form |
//!
//! C and E reach high precision cheaply; A, B and D cost `p^n` residues per level
//! and are run at lower precision for large `p`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::bernoulli::{binomial, bernoulli_number, unit_moment, Rational};
use crate::error::{Error, Result};
use crate::integration::Tracker;
use crate::levels::{class_power_sums, twist, unit_products};
use crate::padic::{ilog_p, iwasawa_log, PadicContext, PadicNumber};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GammaMethod {
    A,
    B,
    /// Logarithmic variant of B.
    BPrime,
    C,
    D,
    E,
}

impl GammaMethod {
    pub const ALL: [GammaMethod; 6] =
        [GammaMethod::A, GammaMethod::B, GammaMethod::BPrime, GammaMethod::C, GammaMethod::D, GammaMethod::E];

    pub fn name(&self) -> &'static str {
        match self {
            GammaMethod::A => "A",
            GammaMethod::B => "B",
            GammaMethod::BPrime => "B'",
            GammaMethod::C => "C",
            GammaMethod::D => "D",
            GammaMethod::E => "E",
        }
    }

    /// Whether the method enumerates residues (and is bound by the residue budget).
    pub fn is_level_sum(&self) -> bool {
        matches!(self, GammaMethod::A | GammaMethod::B | GammaMethod::BPrime | GammaMethod::D)
    }
}

impl fmt::Display for GammaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GammaMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase();
        GammaMethod::ALL
            .into_iter()
            .find(|m| m.name() == up || (up == "BP" && *m == GammaMethod::BPrime))
            .ok_or_else(|| Error::Parse(format!("unknown gamma method {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct GammaResult {
    pub method: GammaMethod,
    pub value: PadicNumber,
    /// Deepest level for level-sum methods, series length otherwise.
    pub levels: u32,
    /// Residues enumerated, or series terms evaluated.
    pub terms: u64,
    pub converged: bool,
    /// `v_p(γ_n − γ_{n−1})` for level-sum methods.
    pub deltas: Vec<i64>,
}

impl GammaResult {
    fn from_tracker(method: GammaMethod, tracker: Tracker) -> Self {
        let r = tracker.finish();
        GammaResult {
            method,
            value: r.value,
            levels: r.levels,
            terms: r.evaluations,
            converged: r.converged,
            deltas: r.deltas,
        }
    }
}

fn check_level(ctx: &PadicContext) -> Result<u32> {
    let top = ctx.max_level();
    if top < 2 {
        return Err(Error::LevelTooDeep { level: 2, limit: top });
    }
    Ok(top)
}

/// Formula A: `−(1/q)((1/q) Σ_{m<q, p∤m} ⟨m⟩^q − (1 − 1/p))`, iterated over `q = p^n`.
///
/// `⟨m⟩^q = m^q ω(m)^(−1)` because `q ≡ 1 mod (p − 1)`.
pub fn gamma_a(ctx: &PadicContext, k: i64) -> Result<GammaResult> {
    let p = ctx.prime();
    let top = check_level(ctx)?;
    let mut tracker = Tracker::new(k);
    let residue = PadicNumber::from_rational(p as i64 - 1, p as i64, p, (k + 2 * top as i64 + 4) as u32)?;
    for n in 1..=top {
        let w = (k + 2 * n as i64 + 2) as u32;
        let q = BigUint::from(p).pow(n);
        let mut sum = BigUint::zero();
        let visited = class_power_sums(p, w, &q, false, n, |s| {
            if s.level == n {
                sum = twist(p, w, -1, &s.plain);
            }
            s.level == n
        });
        let avg = PadicNumber::from_residue(p, &sum, w as i64).shift(-(n as i64));
        let value = avg.sub_ref(&residue).shift(-(n as i64)).neg_ref();
        if tracker.push(n, value, visited) {
            break;
        }
    }
    Ok(GammaResult::from_tracker(GammaMethod::A, tracker))
}

/// Formula B and its logarithmic twin B′ from one pass over the unit products
/// `P_n = Π_{m<p^n, p∤m} m = Γ_p(p^n + 1)`.
pub fn gamma_b_pair(ctx: &PadicContext, k: i64) -> Result<(GammaResult, GammaResult)> {
    let p = ctx.prime();
    let top = check_level(ctx)?;
    let w = (k + top as i64 + 2) as u32;
    let mut tb = Tracker::new(k);
    let mut tl = Tracker::new(k);
    let mut prev = 0u64;
    let mut failure = None;
    unit_products(p, w, top, |n, prod| {
        let count = (p as u64 - 1) * (p as u64).pow(n - 1) - prev;
        prev += count;
        let g = PadicNumber::from_residue(p, &prod, w as i64);
        let b = g.add_ref(&PadicNumber::one(p, w)).shift(-(n as i64));
        let log = match iwasawa_log(&g) {
            Ok(l) => l,
            Err(e) => {
                failure = Some(e);
                return true;
            }
        };
        let bp = log.shift(-(n as i64)).neg_ref();
        let done_b = tb.push(n, b, count);
        let done_l = tl.push(n, bp, count);
        done_b && done_l
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((GammaResult::from_tracker(GammaMethod::B, tb), GammaResult::from_tracker(GammaMethod::BPrime, tl)))
}

/// Formula B. Counts as converged only if B′ converged to the same value.
pub fn gamma_b(ctx: &PadicContext, k: i64) -> Result<GammaResult> {
    let (mut b, bp) = gamma_b_pair(ctx, k)?;
    b.converged &= bp.converged && b.value == bp.value;
    Ok(b)
}

/// Formula C: `−Σ_{n≥1} (1/n) Σ_{j=0}^n C(n,j) (−1)^(j+1) M_j`.
///
/// The `n`-th term has valuation at least `n − 1 − log_p n`, so the sum stops once that
/// bound clears `k`.
pub fn gamma_c(ctx: &PadicContext, k: i64) -> Result<GammaResult> {
    let p = ctx.prime();
    let mut n_max = 1u64;
    while (n_max as i64) - 1 - (ilog_p(n_max, p as u64) as i64) < k + 1 {
        n_max += 1;
    }
    let work = k + ilog_p(n_max, p as u64) as i64 + 3;
    let moments: Vec<PadicNumber> = (0..=n_max as usize).map(|j| unit_moment(j, ctx, work as u32)).collect();
    let mut total = PadicNumber::zero(p, work);
    for n in 1..=n_max {
        let mut inner = PadicNumber::zero(p, work);
        for (j, m) in moments.iter().enumerate().take(n as usize + 1) {
            let c = binomial(n, j as u64);
            let term = m.mul_int(&c);
            inner = if j % 2 == 1 { inner.add_ref(&term) } else { inner.sub_ref(&term) };
        }
        total = total.add_ref(&inner.div_i64(n as i64)?);
    }
    let value = total.neg_ref().truncate_abs(k);
    let converged = value.absolute_precision() >= k;
    Ok(GammaResult {
        method: GammaMethod::C,
        value,
        levels: n_max as u32,
        terms: n_max * (n_max + 3) / 2,
        converged,
        deltas: Vec::new(),
    })
}

/// Formula D: `(1 − ⟨2⟩^q)^(−1) (Σ_{m<q, p∤m} (−1)^(m+1) ⟨m⟩^q / (2m) − (1 − 1/p) L (1 + qL/2))`
/// with `L = log_p⟨2⟩`.
///
/// The denominator has valuation `n + v_p(L)`, which the working precision absorbs.
pub fn gamma_d(ctx: &PadicContext, k: i64) -> Result<GammaResult> {
    let p = ctx.prime();
    let top = check_level(ctx)?;
    let probe = iwasawa_log(&PadicNumber::from_int(p, 2, (k + 40) as u32))?;
    if probe.is_zero() {
        return Err(Error::InsufficientPrecision("log_p⟨2⟩ vanishes to 40 digits".into()));
    }
    let vl = probe.valuation();
    let mut tracker = Tracker::new(k);
    for n in 1..=top {
        let w = (k + n as i64 + vl + 4) as u32;
        let q = BigUint::from(p).pow(n);
        let two = PadicNumber::from_int(p, 2, w + 2);
        let l = iwasawa_log(&two)?;
        let one_unit = crate::padic::one_unit_part(&two)?;
        let denom = PadicNumber::one(p, w + 2).sub_ref(&one_unit.pow(p.pow(n) as u64));
        let exponent = &q - 1u32;
        let mut sum = BigUint::zero();
        let visited = class_power_sums(p, w, &exponent, false, n, |s| {
            if s.level == n {
                sum = twist(p, w, -1, &s.signed);
            }
            s.level == n
        });
        // Σ (−1)^(m+1) m^(q−1) ω(m)^(−1) / 2
        let series = PadicNumber::from_residue(p, &sum, w as i64).div_i64(-2)?;
        let qn = PadicNumber::from_int(p, 1, w + 2).shift(n as i64);
        let correction = PadicNumber::one(p, w + 2).add_ref(&qn.mul_ref(&l).div_i64(2)?);
        let residue = PadicNumber::from_rational(p as i64 - 1, p as i64, p, w + 2)?;
        let numer = series.sub_ref(&residue.mul_ref(&l).mul_ref(&correction));
        let value = numer.div(&denom)?;
        if tracker.push(n, value, visited) {
            break;
        }
    }
    Ok(GammaResult::from_tracker(GammaMethod::D, tracker))
}

/// Formula E: `(1/p) Σ_{a=1}^{p−1} (−log_p⟨a⟩ + Σ_{j≥1} ((−1)^j/j) B_j (p/a)^j)`.
pub fn gamma_e(ctx: &PadicContext, k: i64) -> Result<GammaResult> {
    let p = ctx.prime();
    let work = k + 3;
    // v(B_j p^j / j) ≥ j − 1 − log_p j, and the outer 1/p costs one more digit.
    let mut j_max = 1u64;
    while (j_max as i64) - 2 - (ilog_p(j_max, p as u64) as i64) < k {
        j_max += 1;
    }
    let pr = Rational::from_integer(BigInt::from(p));
    let mut total = PadicNumber::zero(p, work);
    let mut terms = 0u64;
    for a in 1..p {
        let log = iwasawa_log(&PadicNumber::from_int(p, a as i64, work as u32))?;
        let ar = Rational::from_integer(BigInt::from(a));
        let mut series = Rational::zero();
        for j in 1..=j_max as usize {
            let b = bernoulli_number(j);
            if b.is_zero() {
                continue;
            }
            let sign = if j % 2 == 0 { 1 } else { -1 };
            series += b * (&pr / &ar).pow(j as i32) * Rational::new(BigInt::from(sign), BigInt::from(j));
            terms += 1;
        }
        total = total.sub_ref(&log).add_ref(&PadicNumber::from_ratio_abs(&series, p, work));
    }
    let value = total.shift(-1).truncate_abs(k);
    let converged = value.absolute_precision() >= k;
    Ok(GammaResult { method: GammaMethod::E, value, levels: j_max as u32, terms, converged, deltas: Vec::new() })
}

pub fn gamma(method: GammaMethod, ctx: &PadicContext, k: i64) -> Result<GammaResult> {
    match method {
        GammaMethod::A => gamma_a(ctx, k),
        GammaMethod::B => gamma_b(ctx, k),
        GammaMethod::BPrime => gamma_b_pair(ctx, k).map(|(_, bp)| bp),
        GammaMethod::C => gamma_c(ctx, k),
        GammaMethod::D => gamma_d(ctx, k),
        GammaMethod::E => gamma_e(ctx, k),
    }
}

/// The digit table: `(p, [(exponent, coefficient)], O-term exponent)`.
const REFERENCE: &[(u32, &[(i64, u32)], i64)] = &[
    (3, &[(1, 2), (2, 2), (3, 1), (4, 2), (5, 1), (6, 2), (7, 2), (8, 2)], 10),
    (5, &[(1, 1), (3, 3), (5, 2), (6, 3), (7, 4), (8, 1), (9, 2)], 10),
    (7, &[(0, 5), (1, 2), (2, 4), (3, 6), (4, 2), (6, 6), (7, 2), (9, 1)], 10),
    (11, &[(0, 1), (1, 10), (2, 2), (3, 1), (4, 5), (5, 5), (6, 4), (7, 5)], 8),
    (13, &[(1, 4), (3, 7), (4, 8), (5, 7), (6, 6), (7, 4), (8, 9)], 9),
];

/// Published value of `γ_p` for `p ∈ {3, 5, 7, 11, 13}`.
pub fn reference_gamma(p: u32) -> Option<PadicNumber> {
    let (_, terms, abs) = REFERENCE.iter().find(|(q, _, _)| *q == p)?;
    let mut digits = vec![0u32; *abs as usize];
    for &(e, c) in terms.iter() {
        digits[e as usize] = c;
    }
    let val = digits.iter().position(|&d| d != 0)? as i64;
    Some(PadicNumber::from_digits(p, val, &digits[val as usize..], *abs).expect("table digits are valid"))
}

/// Outcome of running several formulas side by side.
#[derive(Clone, Debug)]
pub struct GammaConsensus {
    pub prime: u32,
    pub results: Vec<(GammaMethod, std::result::Result<GammaResult, Error>)>,
    /// Common value to the highest precision all converged methods agree on.
    pub consensus: Option<PadicNumber>,
    /// Pairwise `v_p(difference)` between converged methods.
    pub disagreements: Vec<(GammaMethod, GammaMethod, i64)>,
    pub reference: Option<PadicNumber>,
}

impl GammaConsensus {
    /// Every requested method converged.
    pub fn all_converged(&self) -> bool {
        self.results.iter().all(|(_, r)| matches!(r, Ok(g) if g.converged))
    }

    /// Every pair agrees to the precision of the less precise member.
    pub fn unanimous(&self) -> bool {
        self.all_converged()
            && self.disagreements.iter().all(|(a, b, v)| {
                let pa = self.precision_of(*a);
                let pb = self.precision_of(*b);
                *v >= pa.min(pb)
            })
    }

    fn precision_of(&self, m: GammaMethod) -> i64 {
        self.results
            .iter()
            .find(|(x, _)| *x == m)
            .and_then(|(_, r)| r.as_ref().ok())
            .map_or(i64::MIN, |g| g.value.absolute_precision())
    }

    /// Consensus agrees with the table on all digits both know.
    pub fn matches_reference(&self) -> Option<bool> {
        let (c, r) = (self.consensus.as_ref()?, self.reference.as_ref()?);
        let shared = c.absolute_precision().min(r.absolute_precision());
        Some(c.truncate_abs(shared) == r.truncate_abs(shared) && c.agreement(r) >= shared)
    }
}

/// Precision at which level-sum methods are run inside [`gamma_consensus`]: the level
/// methods need about `k + 3` levels, so `k` is lowered until that fits the budget.
pub fn level_precision(ctx: &PadicContext, k: i64) -> i64 {
    k.min(ctx.max_level() as i64 - 3).max(1)
}

/// Runs `methods`; closed-form methods at `k`, level-sum methods at [`level_precision`].
pub fn gamma_consensus(ctx: &PadicContext, k: i64, methods: &[GammaMethod]) -> GammaConsensus {
    let p = ctx.prime();
    let mut results: Vec<(GammaMethod, std::result::Result<GammaResult, Error>)> = Vec::new();
    let mut b_pair = None;
    for &m in methods {
        let r = match m {
            GammaMethod::B | GammaMethod::BPrime => {
                let pair = b_pair.get_or_insert_with(|| gamma_b_pair(ctx, level_precision(ctx, k)));
                match pair {
                    Ok((b, bp)) => Ok(if m == GammaMethod::B { b.clone() } else { bp.clone() }),
                    Err(e) => Err(e.clone()),
                }
            }
            _ if m.is_level_sum() => gamma(m, ctx, level_precision(ctx, k)),
            _ => gamma(m, ctx, k),
        };
        results.push((m, r));
    }
    let converged: Vec<&GammaResult> =
        results.iter().filter_map(|(_, r)| r.as_ref().ok()).filter(|g| g.converged).collect();
    let mut disagreements = Vec::new();
    for (i, a) in converged.iter().enumerate() {
        for b in &converged[i + 1..] {
            disagreements.push((a.method, b.method, a.value.agreement(&b.value)));
        }
    }
    // The most precise value is the consensus if every other method matches it to its own
    // precision; otherwise fall back to the digits all pairs share.
    let best = converged.iter().max_by_key(|g| g.value.absolute_precision());
    let consensus = best.map(|top| {
        if converged.iter().all(|g| g.value.agreement(&top.value) >= g.value.absolute_precision()) {
            top.value.clone()
        } else {
            let mut abs = converged.iter().map(|g| g.value.absolute_precision()).min().unwrap_or(k);
            for (_, _, v) in &disagreements {
                abs = abs.min(*v);
            }
            top.value.truncate_abs(abs)
        }
    });
    GammaConsensus { prime: p, results, consensus, disagreements, reference: reference_gamma(p) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::to_digits;

    fn ctx(p: u32) -> PadicContext {
        PadicContext::new(p, 10, 30).unwrap()
    }

    #[test]
    fn reference_table_renders_as_printed() {
        assert_eq!(
            to_digits(&reference_gamma(3).unwrap()),
            "2·3 + 2·3² + 3³ + 2·3⁴ + 3⁵ + 2·3⁶ + 2·3⁷ + 2·3⁸ + O(3¹⁰)"
        );
        assert_eq!(
            to_digits(&reference_gamma(13).unwrap()),
            "4·13 + 7·13³ + 8·13⁴ + 7·13⁵ + 6·13⁶ + 4·13⁷ + 9·13⁸ + O(13⁹)"
        );
        assert!(reference_gamma(17).is_none());
    }

    #[test]
    fn e_reproduces_gamma3() {
        let g = gamma_e(&ctx(3), 10).unwrap();
        assert_eq!(g.value, reference_gamma(3).unwrap());
        assert_eq!(g.value.absolute_precision(), 10);
    }

    #[test]
    fn c_reproduces_large_primes() {
        assert_eq!(gamma_c(&ctx(11), 8).unwrap().value, reference_gamma(11).unwrap());
        assert_eq!(gamma_c(&ctx(13), 9).unwrap().value, reference_gamma(13).unwrap());
    }

    #[test]
    fn gamma5_leading_digits_from_a() {
        let g = gamma_a(&ctx(5), 4).unwrap();
        assert!(g.converged);
        assert_eq!(to_digits(&g.value), "5 + 3·5³ + O(5⁴)");
    }

    #[test]
    fn gamma7_from_b() {
        let (b, bp) = gamma_b_pair(&ctx(7), 4).unwrap();
        assert!(b.converged && bp.converged);
        assert_eq!(to_digits(&b.value), "5 + 2·7 + 4·7² + 6·7³ + O(7⁴)");
        assert_eq!(b.value, bp.value);
    }

    #[test]
    fn d_agrees_with_c_p3() {
        let c = ctx(3);
        let d = gamma_d(&c, 5).unwrap();
        assert!(d.converged, "{:?}", d.deltas);
        assert_eq!(d.value, gamma_c(&c, 5).unwrap().value);
    }

    #[test]
    fn consensus_p5() {
        let r = gamma_consensus(&ctx(5), 9, &[GammaMethod::C, GammaMethod::E]);
        assert!(r.unanimous());
        assert_eq!(r.matches_reference(), Some(true));
        let single = gamma_consensus(&ctx(5), 6, &[GammaMethod::E]);
        assert_eq!(single.consensus.unwrap(), gamma_e(&ctx(5), 6).unwrap().value);
    }

    #[test]
    fn all_methods_unanimous_p3() {
        let r = gamma_consensus(&ctx(3), 5, &GammaMethod::ALL);
        assert!(r.unanimous(), "{:?}", r.disagreements);
    }

    #[test]
    fn level_methods_respect_the_budget() {
        let tiny = PadicContext::new(7, 10, 30).unwrap().with_residue_budget(400);
        let g = gamma_a(&tiny, 6).unwrap();
        assert!(!g.converged);
        assert!(g.levels <= 3);
    }

    #[test]
    fn method_names_parse() {
        for m in GammaMethod::ALL {
            assert_eq!(m.name().parse::<GammaMethod>().unwrap(), m);
        }
        assert_eq!("bp".parse::<GammaMethod>().unwrap(), GammaMethod::BPrime);
    }
}
