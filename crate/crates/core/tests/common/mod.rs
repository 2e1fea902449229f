//! Invariant checks shared by the property suite and the acceptance run.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;

use padic_core::integration::{riemann_integral, Integrand};
use padic_core::measures::{
    seminorm, set_measure, BernoulliMu1, ClopenBall, ClopenSet, Measure, QadicHaar, RegularizedBernoulli, TableMeasure,
};
use padic_core::padic::{exp_p, iwasawa_log, one_unit_power, teichmuller, unit_decompose, PowerMethod};
use padic_core::zeta::zeta_bernoulli;
use padic_core::{PadicContext, PadicNumber};

const K: u32 = 12;

pub fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub fn q(a: i64, b: i64, p: u32) -> PadicNumber {
    PadicNumber::from_rational(a, b, p, K).unwrap()
}

/// Shifts `b` off multiples of `p`.
pub fn coprime(b: i64, p: u32) -> i64 {
    if b % p as i64 == 0 {
        b + 1
    } else {
        b
    }
}

pub fn check_ultrametric(p: u32, a: i64, b: i64, c: i64, d: i64) {
    let (x, y) = (q(a, b, p), q(c, d, p));
    let sum = &x + &y;
    let floor = x.valuation().min(y.valuation());
    assert!(sum.valuation() >= floor, "v({x} + {y}) = {} < {floor}", sum.valuation());
    if x.valuation() != y.valuation() {
        assert_eq!(sum.valuation(), floor);
    }
    assert_eq!((&x * &y).valuation(), x.valuation() + y.valuation());
}

pub fn check_teichmuller(p: u32, a: i64, b: i64, c: i64, d: i64) {
    let (a, b, c, d) = (coprime(a, p), coprime(b, p), coprime(c, p), coprime(d, p));
    let (x, y) = (q(a, b, p), q(c, d, p));
    let (wx, wy) = (teichmuller(&x).unwrap(), teichmuller(&y).unwrap());
    assert_eq!(teichmuller(&(&x * &y)).unwrap(), &wx * &wy);
    let root = wx.pow(p as u64 - 1);
    assert!((&root - &PadicNumber::one(p, K)).is_zero(), "ω^(p-1) = {root}");
    assert!((&wx - &x).valuation() >= 1);
    let dec = unit_decompose(&x.shift(3)).unwrap();
    assert_eq!(dec.valuation, 3);
    assert_eq!((&dec.teichmuller * &dec.one_unit).shift(3), x.shift(3));
}

pub fn check_exp_log(p: u32, a: i64, b: i64, c: i64, d: i64) {
    let (b, c, d) = (coprime(b, p), coprime(c, p), coprime(d, p));
    let x = q(a, b, p).shift(1);
    if !x.is_zero() {
        let back = iwasawa_log(&exp_p(&x).unwrap()).unwrap();
        assert!(back.agreement(&x) >= K as i64 - 1, "log(exp({x})) = {back}");
    }
    let (u, v) = (q(c, d, p), q(b, c, p));
    let (lu, lv) = (iwasawa_log(&u).unwrap(), iwasawa_log(&v).unwrap());
    assert!(iwasawa_log(&(&u * &v)).unwrap().agreement(&(&lu + &lv)) >= K as i64 - 1);
    let expd = exp_p(&lu).unwrap();
    assert!(expd.agreement(&unit_decompose(&u).unwrap().one_unit) >= K as i64 - 1);
}

pub fn check_unit_power(p: u32, a: i64, b: i64, c: i64, d: i64, n: u8) {
    let (b, d) = (coprime(b, p), coprime(d, p));
    let u = q(a, b, p).shift(1) + PadicNumber::one(p, K);
    let s = PadicNumber::from_ratio_abs(&rat(c, d), p, K as i64 + 4);
    let t = PadicNumber::from_ratio_abs(&rat(d, b), p, K as i64 + 4);
    let exp_log = one_unit_power(&u, &s, PowerMethod::ExpLog).unwrap();
    let binomial = one_unit_power(&u, &s, PowerMethod::Binomial).unwrap();
    assert!(exp_log.agreement(&binomial) >= K as i64 - 1, "{exp_log} vs {binomial}");
    let st = one_unit_power(&u, &(&s + &t), PowerMethod::ExpLog).unwrap();
    let ut = one_unit_power(&u, &t, PowerMethod::Binomial).unwrap();
    assert!(st.agreement(&(&exp_log * &ut)) >= K as i64 - 1);
    let int = PadicNumber::from_int(p, n as i64, K + 4);
    assert!(one_unit_power(&u, &int, PowerMethod::Binomial).unwrap().agreement(&u.pow(n as u64)) >= K as i64 - 1);
}

pub fn check_homomorphism(p: u32, a: i64, b: i64, c: i64, d: i64) {
    let (x, y) = (rat(a, b), rat(c, d));
    let abs = 10;
    let embed = |r: &BigRational| PadicNumber::from_ratio_abs(r, p, abs);
    let sum = embed(&(&x + &y));
    assert!(sum.agreement(&(embed(&x) + embed(&y))) >= abs);
    let prod = embed(&x) * embed(&y);
    assert!(embed(&(&x * &y)).agreement(&prod) >= prod.absolute_precision().min(abs));
}

pub fn measures(p: u32) -> Vec<Box<dyn Measure>> {
    let other = if p == 3 { 5 } else { 3 };
    vec![
        Box::new(RegularizedBernoulli { prime: p }),
        Box::new(BernoulliMu1 { prime: p }),
        Box::new(QadicHaar::new(p, other).unwrap()),
        Box::new(TableMeasure::alternating(p, 4).unwrap()),
    ]
}

pub fn random_set(p: u32, level: u32, bits: &[bool]) -> ClopenSet {
    let m = (p as u64).pow(level);
    let residues = (0..m).filter(|&r| bits[r as usize % bits.len()] ^ (r % 3 == 1 && bits.len() % 2 == 0));
    ClopenSet::with_cap(p, level, 8, residues).unwrap()
}

pub fn naive(m: &dyn Measure, set: &ClopenSet) -> BigRational {
    set.residues()
        .iter()
        .map(|&r| m.ball_value(&ClopenBall::new(set.prime(), set.level(), r).unwrap()).unwrap())
        .sum()
}

pub fn check_presentation(p: u32, level: u32, bits: &[bool], extra: u32) {
    let set = random_set(p, level, bits);
    for m in measures(p) {
        let m = m.as_ref();
        let direct = naive(m, &set);
        assert_eq!(set_measure(m, &set).unwrap(), direct, "{}", m.name());
        assert_eq!(set_measure(m, &set.canonical()).unwrap(), direct);
        assert_eq!(set_measure(m, &set.refine(level + extra).unwrap()).unwrap(), direct);
    }
}

pub fn check_additivity(p: u32, level: u32, a: &[bool], b: &[bool]) {
    let (sa, sb) = (random_set(p, level, a), random_set(p, level + 1, b));
    for m in measures(p) {
        let m = m.as_ref();
        let mu = |s: &ClopenSet| set_measure(m, s).unwrap();
        let union = sa.union(&sb).unwrap();
        let inter = sa.intersection(&sb).unwrap();
        assert_eq!(mu(&union) + mu(&inter), mu(&sa) + mu(&sb), "{}", m.name());
        let diff = sa.difference(&sb).unwrap();
        assert!(diff.is_disjoint(&inter).unwrap());
        assert_eq!(mu(&diff) + mu(&inter), mu(&sa));
        let full = ClopenSet::with_cap(p, 0, 8, [0]).unwrap();
        assert_eq!(mu(&sa) + mu(&sa.complement()), mu(&full));
    }
}

pub fn check_seminorm_bound(p: u32, level: u32, bits: &[bool]) {
    let set = random_set(p, level, bits);
    for m in measures(p).into_iter().filter(|m| m.is_bounded()) {
        let m = m.as_ref();
        let value = set_measure(m, &set).unwrap();
        let est = seminorm(m, &set, level + 1).unwrap();
        if value == BigRational::from_integer(0.into()) {
            continue;
        }
        let v = PadicNumber::from_ratio(&value, m.value_prime(), 1).valuation();
        let e = est.norm_exponent.expect("nonzero measure has nonzero seminorm");
        assert!(-v <= e, "{}: |μ(A)| = q^{} > q^{e}", m.name(), -v);
    }
}

pub fn check_riemann_linearity(p: u32, f: &[i64], g: &[i64], alpha: i64, beta: i64) {
    let ctx = PadicContext::new(p, 4, 12).unwrap();
    let k = 2;
    let poly = |c: &[i64]| Integrand::polynomial(c.iter().map(|&x| rat(x, 1)).collect());
    let combo: Vec<i64> = (0..f.len().max(g.len()))
        .map(|i| alpha * f.get(i).copied().unwrap_or(0) + beta * g.get(i).copied().unwrap_or(0))
        .collect();
    let m = RegularizedBernoulli { prime: p };
    let int = |c: &[i64]| riemann_integral(&poly(c), &m, &ctx, k).unwrap().into_result().unwrap();
    let lhs = int(&combo);
    let rhs = int(f).mul_i64(alpha) + int(g).mul_i64(beta);
    assert!(lhs.agreement(&rhs) >= k, "{lhs} vs {rhs}");
}

pub fn check_zeta_continuity(p: u32, i: i64, s: i64, j: u32) {
    let ctx = PadicContext::new(p, 6, 20).unwrap();
    let k = 3;
    let i = i.rem_euclid(p as i64 - 1);
    if i == 1 {
        return;
    }
    let shift = (p as i64).pow(j);
    let at = |t: i64| {
        let tp = PadicNumber::from_int(p, t, 40);
        zeta_bernoulli(i, &tp, &ctx, k).unwrap().value
    };
    let (a, b) = (at(s), at(s + shift));
    assert!(a.agreement(&b) >= (j as i64).min(k), "ζ_{i}({s}) = {a}, ζ_{i}({}) = {b}", s + shift);
}
