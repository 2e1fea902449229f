//! Bernoulli numbers and the p-adic quantities derived from them.
//!
//! Convention: `B_1 = -1/2`, so that `Σ_{m<X} m^n = (1/(n+1)) Σ_j C(n+1,j) B_j X^(n+1-j)`
//! holds with the sum starting at `m = 0`. The opposite convention would flip the sign of
//! every odd-index term downstream.

use std::sync::{LazyLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{teichmuller_residue, PadicContext, PadicNumber};
use crate::residue::{run_mod, Kernel, ResidueRing};

pub type Rational = BigRational;

/// `C(n, k)` as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Append-only memo table `n ↦ B_n`.
#[derive(Debug)]
pub struct BernoulliCache {
    table: RwLock<Vec<Rational>>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache { table: RwLock::new(vec![Rational::one()]) }
    }

    pub fn get(&self, n: usize) -> Rational {
        if let Some(b) = self.table.read().expect("cache lock").get(n) {
            return b.clone();
        }
        let mut table = self.table.write().expect("cache lock");
        while table.len() <= n {
            let m = table.len();
            // Σ_{j=0}^{m} C(m+1, j) B_j = 0
            let mut acc = Rational::zero();
            let mut c = BigInt::one();
            for (j, b) in table.iter().enumerate() {
                if !b.is_zero() {
                    acc += b * Rational::from_integer(c.clone());
                }
                c = c * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            table.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
        }
        table[n].clone()
    }
}

static CACHE: LazyLock<BernoulliCache> = LazyLock::new(BernoulliCache::new);

pub fn bernoulli_number(n: usize) -> Rational {
    CACHE.get(n)
}

/// `B_n(x) = Σ_j C(n,j) B_j x^(n-j)`.
pub fn bernoulli_polynomial(n: usize, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut xpow = Rational::one();
    // iterate j = n, n-1, ..., 0 so that x^(n-j) grows
    for j in (0..=n).rev() {
        let b = bernoulli_number(j);
        if !b.is_zero() {
            acc += b * Rational::from_integer(binomial(n as u64, j as u64)) * &xpow;
        }
        xpow *= x;
    }
    acc
}

/// `Σ_{m=0}^{X-1} m^n` via the Bernoulli-number closed form.
pub fn power_sum(n: usize, x: &BigInt) -> BigInt {
    let mut acc = Rational::zero();
    for j in 0..=n {
        let b = bernoulli_number(j);
        if b.is_zero() {
            continue;
        }
        let c = Rational::from_integer(binomial(n as u64 + 1, j as u64));
        acc += b * c * Rational::from_integer(x.pow((n + 1 - j) as u32));
    }
    let r = acc / Rational::from_integer(BigInt::from(n + 1));
    debug_assert!(r.is_integer());
    r.to_integer()
}

/// `ω(a)^e` for `a = 1, …, p-1` (index `a - 1`), known to `prec` digits.
pub(crate) fn teichmuller_powers(p: u32, e: i64, prec: u32) -> Vec<PadicNumber> {
    let order = p as i64 - 1;
    let e = e.rem_euclid(order) as u32;
    (1..p)
        .map(|a| {
            let w = teichmuller_residue(&BigUint::from(a), p, prec);
            PadicNumber::from_parts(p, 0, w, prec).expect("Teichmüller lift is a unit").pow(e as u64)
        })
        .collect()
}

/// Generalized Bernoulli number `B_{n,χ}` for `χ = ω^(-k)`, `k ≢ 0 mod (p-1)`, to `O(p^prec)`.
///
/// Uses `B_{n,χ} = p^(n-1) Σ_{a=1}^{p-1} χ(a) B_n(a/p)`, expanded as
/// `Σ_a χ(a) Σ_j C(n,j) B_j a^(n-j) p^(j-1)` so that each inner sum is an exact rational.
pub fn gen_bernoulli(n: usize, k: i64, ctx: &PadicContext, prec: u32) -> Result<PadicNumber> {
    let p = ctx.prime();
    if k.rem_euclid(p as i64 - 1) == 0 {
        return Err(Error::TrivialCharacter(k));
    }
    let work = prec as i64 + 3;
    let chi = teichmuller_powers(p, -k, work as u32 + 2);
    let pr = Rational::from_integer(BigInt::from(p));
    let mut sum = PadicNumber::zero(p, work);
    for a in 1..p {
        let ar = Rational::from_integer(BigInt::from(a));
        let mut inner = Rational::zero();
        for j in 0..=n {
            let b = bernoulli_number(j);
            if b.is_zero() {
                continue;
            }
            let c = Rational::from_integer(binomial(n as u64, j as u64));
            inner += b * c * ar.pow((n - j) as i32) * pr.pow(j as i32 - 1);
        }
        let term = PadicNumber::from_ratio_abs(&inner, p, work + 2).mul_ref(&chi[a as usize - 1]);
        sum = sum.add_ref(&term);
    }
    Ok(sum.truncate_abs(prec as i64))
}

/// `lim_m p^(-m) Σ_{a<p^m, p∤a} ω(a)^(-j) a^j`, the Volkenborn integral of `ω^(-j)(x) x^j`
/// over `Z_p^×`, to `O(p^prec)`.
///
/// `j = 0` gives `1 - 1/p`; `(p-1) | j` gives `(1 - p^(j-1)) B_j`; otherwise `B_{j,ω^(-j)}`.
pub fn unit_moment(j: usize, ctx: &PadicContext, prec: u32) -> PadicNumber {
    let p = ctx.prime();
    if j % (p as usize - 1) == 0 {
        let pr = Rational::from_integer(BigInt::from(p));
        let factor = Rational::one() - pr.pow(j as i32 - 1);
        let value = factor * bernoulli_number(j);
        return PadicNumber::from_ratio_abs(&value, p, prec as i64);
    }
    gen_bernoulli(j, j as i64, ctx, prec).expect("nontrivial character")
}

struct GammaProduct {
    p: u32,
    n: u64,
}

impl Kernel for GammaProduct {
    type Output = BigUint;
    fn run<R: ResidueRing>(self, ring: &R) -> BigUint {
        let mut acc = ring.one();
        let p = self.p as u64;
        for m in 1..self.n {
            if m % p != 0 {
                acc = ring.mul(&acc, &ring.from_u64(m));
            }
        }
        if self.n % 2 == 1 {
            acc = ring.neg(&acc);
        }
        ring.to_big(&acc)
    }
}

/// Morita's `Γ_p(n) = (-1)^n Π_{1≤m<n, p∤m} m` modulo `p^prec`.
pub fn gamma_p_int(n: u64, ctx: &PadicContext, prec: u32) -> PadicNumber {
    let p = ctx.prime();
    let r = run_mod(p, prec, GammaProduct { p, n });
    PadicNumber::from_residue(p, &r, prec as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> Rational {
        Rational::new(BigInt::from(a), BigInt::from(b))
    }

    /// Direct evaluation of the defining recurrence, independent of the cache.
    fn recurrence_oracle(n: usize) -> Vec<Rational> {
        let mut b = vec![rat(1, 1)];
        for m in 1..=n {
            let s: Rational = (0..m).map(|j| Rational::from_integer(binomial(m as u64 + 1, j as u64)) * &b[j]).sum();
            b.push(-s / rat(m as i64 + 1, 1));
        }
        b
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli_number(0), rat(1, 1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(4), rat(-1, 30));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
        assert!(bernoulli_number(13).is_zero());
        let oracle = recurrence_oracle(30);
        for (n, b) in oracle.iter().enumerate() {
            assert_eq!(&bernoulli_number(n), b, "B_{n}");
        }
    }

    #[test]
    fn von_staudt_clausen_denominators() {
        for m in 1..=15usize {
            let n = 2 * m;
            let expect: u64 = (2..=n as u64 + 1)
                .filter(|&q| crate::padic::is_prime(q) && n as u64 % (q - 1) == 0)
                .product();
            assert_eq!(bernoulli_number(n).denom(), &BigInt::from(expect), "B_{n}");
        }
    }

    #[test]
    fn odd_bernoulli_vanish() {
        for n in (3..40).step_by(2) {
            assert!(bernoulli_number(n).is_zero());
        }
    }

    #[test]
    fn polynomial_examples() {
        for n in 0..8 {
            assert_eq!(bernoulli_polynomial(n, &Rational::zero()), bernoulli_number(n));
        }
        assert_eq!(bernoulli_polynomial(1, &rat(1, 3)), rat(-1, 6));
        assert_eq!(bernoulli_polynomial(2, &rat(1, 5)), rat(1, 150));
    }

    #[test]
    fn power_sums_match_brute_force() {
        for p in [3i64, 5, 7] {
            let x = p * p * p;
            for n in 0..=8usize {
                let brute: BigInt = (0..x).map(|m| BigInt::from(m).pow(n as u32)).sum();
                assert_eq!(power_sum(n, &BigInt::from(x)), brute, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn gen_bernoulli_bounded_by_p() {
        for p in [3u32, 5, 7, 11] {
            let ctx = PadicContext::new(p, 6, 8).unwrap();
            for n in 1..25 {
                let b = gen_bernoulli(n, 1, &ctx, 6).unwrap();
                assert!(b.is_zero() || b.valuation() >= -1, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn gen_bernoulli_rejects_trivial_character() {
        let ctx = PadicContext::new(5, 4, 8).unwrap();
        assert_eq!(gen_bernoulli(2, 4, &ctx, 4), Err(Error::TrivialCharacter(4)));
        assert_eq!(gen_bernoulli(2, 0, &ctx, 4), Err(Error::TrivialCharacter(0)));
    }

    #[test]
    fn gen_bernoulli_parity_vanishing() {
        // B_{n,χ} = 0 when χ(-1) ≠ (-1)^n, n ≥ 2
        let ctx = PadicContext::new(7, 6, 8).unwrap();
        for n in 2..10usize {
            for k in 1..6i64 {
                if (n as i64 + k) % 2 == 1 {
                    assert!(gen_bernoulli(n, k, &ctx, 6).unwrap().is_zero(), "n={n} k={k}");
                }
            }
        }
    }

    /// `p^(-m) Σ_{a<p^m, p∤a} ω(a)^(-k) a^n`, by brute force over integers mod `p^(m+w)`.
    fn level_sum_oracle(n: u32, k: i64, p: u32, m: u32, w: u32) -> PadicNumber {
        let modulus = crate::padic::ppow(p, m + w);
        let e = BigUint::from(k.rem_euclid(p as i64 - 1) as u64 * (p as u64 - 2) % (p as u64 - 1));
        let omega_inv: Vec<BigUint> = (0..p)
            .map(|a| teichmuller_residue(&BigUint::from(a), p, m + w).modpow(&e, &modulus))
            .collect();
        let mut acc = BigUint::zero();
        for a in 1..p.pow(m) {
            if a % p == 0 {
                continue;
            }
            let ab = BigUint::from(a);
            acc += &omega_inv[(a % p) as usize] * ab.modpow(&BigUint::from(n), &modulus);
        }
        PadicNumber::from_residue(p, &(acc % &modulus), (m + w) as i64).shift(-(m as i64))
    }

    #[test]
    fn gen_bernoulli_matches_level_sums() {
        for p in [5u32, 7] {
            let ctx = PadicContext::new(p, 4, 8).unwrap();
            for n in 1..=4usize {
                for k in 1..=(p as i64 - 2) {
                    let closed = gen_bernoulli(n, k, &ctx, 4).unwrap();
                    let m = if p == 5 { 6 } else { 5 };
                    let oracle = level_sum_oracle(n as u32, k, p, m, 6);
                    assert!(closed.agreement(&oracle) >= 4, "p={p} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn gen_bernoulli_first_moment_p5() {
        let ctx = PadicContext::new(5, 6, 8).unwrap();
        let closed = gen_bernoulli(1, 1, &ctx, 6).unwrap();
        let oracle = level_sum_oracle(1, 1, 5, 6, 8);
        assert!(closed.agreement(&oracle) >= 5);
    }

    #[test]
    fn level_sum_error_shrinks_with_level() {
        let ctx = PadicContext::new(5, 10, 8).unwrap();
        let closed = unit_moment(2, &ctx, 10);
        let mut last = i64::MIN;
        for m in 2..=6 {
            let agree = closed.agreement(&level_sum_oracle(2, 2, 5, m, 10));
            assert!(agree >= m as i64 - 2, "m={m} agree={agree}");
            assert!(agree >= last);
            last = agree;
        }
    }

    #[test]
    fn unit_moment_closed_forms() {
        let ctx = PadicContext::new(5, 6, 8).unwrap();
        let m0 = unit_moment(0, &ctx, 6);
        assert_eq!(m0, PadicNumber::from_rational(4, 5, 5, 8).unwrap());
        let m4 = unit_moment(4, &ctx, 6);
        assert_eq!(m4, PadicNumber::from_rational(62, 15, 5, 8).unwrap());
    }

    #[test]
    fn gamma_examples() {
        let ctx = PadicContext::new(5, 6, 8).unwrap();
        assert_eq!(gamma_p_int(0, &ctx, 6), PadicNumber::one(5, 6));
        assert_eq!(gamma_p_int(1, &ctx, 6), PadicNumber::from_int(5, -1, 6));
        assert_eq!(gamma_p_int(6, &ctx, 6), PadicNumber::from_int(5, 24, 6));
        // Γ_p(x+1) = -Γ_p(x) when p | x
        for x in [5u64, 10, 25] {
            assert_eq!(gamma_p_int(x + 1, &ctx, 6), -gamma_p_int(x, &ctx, 6));
        }
    }

    #[test]
    fn gamma_lipschitz_on_integers() {
        let ctx = PadicContext::new(3, 8, 8).unwrap();
        for n in 0..20u64 {
            for shift in [3u64, 9, 27, 81] {
                let d = gamma_p_int(n + shift, &ctx, 8) - gamma_p_int(n, &ctx, 8);
                let vshift = crate::padic::vp_u64(shift, 3) as i64;
                assert!(d.valuation() >= vshift, "n={n} shift={shift}");
            }
        }
    }

    #[test]
    fn gamma_at_powers_of_p_tends_to_minus_one() {
        let ctx = PadicContext::new(5, 10, 8).unwrap();
        for n in 1..6u32 {
            let g = gamma_p_int(5u64.pow(n) + 1, &ctx, 10);
            assert!(g.agreement(&PadicNumber::from_int(5, -1, 10)) >= n as i64);
        }
    }
}
