//! Teichmüller decomposition and the p-adic analytic functions built on it.

use num_bigint::{BigInt, BigUint};

use super::number::{ilog_p, ppow, PadicNumber};
use crate::error::{Error, Result};

/// `x = p^v · ω(x) · ⟨x⟩` for a nonzero `x`.
#[derive(Clone, Debug)]
pub struct UnitDecomposition {
    pub valuation: i64,
    /// `(p-1)`-st root of unity congruent to `x / p^v` mod `p`.
    pub teichmuller: PadicNumber,
    /// Principal unit, `≡ 1 mod p`.
    pub one_unit: PadicNumber,
}

/// Teichmüller lift of the residue `a mod p^k` (`p ∤ a`), as an integer in `[0, p^k)`.
///
/// Iterates `m ↦ m^p`; the sequence is constant from the `k`-th step on.
pub fn teichmuller_residue(a: &BigUint, p: u32, k: u32) -> BigUint {
    let modulus = ppow(p, k);
    let pb = BigUint::from(p);
    let mut m = a % &modulus;
    for _ in 0..k {
        let next = m.modpow(&pb, &modulus);
        if next == m {
            break;
        }
        m = next;
    }
    m
}

pub fn unit_decompose(x: &PadicNumber) -> Result<UnitDecomposition> {
    if x.is_zero() {
        return Err(Error::ZeroInput("unit_decompose"));
    }
    let p = x.prime();
    let k = x.precision();
    let w = teichmuller_residue(x.unit(), p, k);
    let teichmuller = PadicNumber::from_parts(p, 0, w, k)?;
    let unit = PadicNumber::from_parts(p, 0, x.unit().clone(), k)?;
    let one_unit = unit.div(&teichmuller)?;
    Ok(UnitDecomposition { valuation: x.valuation(), teichmuller, one_unit })
}

/// `ω(x)` of a unit.
pub fn teichmuller(x: &PadicNumber) -> Result<PadicNumber> {
    Ok(unit_decompose(x)?.teichmuller)
}

/// `⟨x⟩ = x / (p^v ω(x))`.
pub fn one_unit_part(x: &PadicNumber) -> Result<PadicNumber> {
    Ok(unit_decompose(x)?.one_unit)
}

/// Iwasawa logarithm of a unit: `log_p x = log_p ⟨x⟩`, so roots of unity map to 0.
pub fn iwasawa_log(x: &PadicNumber) -> Result<PadicNumber> {
    if x.is_zero() || x.valuation() != 0 {
        return Err(Error::NotAUnit("iwasawa_log"));
    }
    let p = x.prime();
    let one_unit = unit_decompose(x)?.one_unit;
    let abs = one_unit.absolute_precision();
    let z = &one_unit - &PadicNumber::one(p, abs as u32);
    if z.is_zero() {
        return Ok(PadicNumber::zero(p, abs));
    }
    Ok(log_one_plus(&z, abs))
}

/// `log(1 + z) = Σ (-1)^(n+1) z^n / n` for `v(z) ≥ 1`, summed to `O(p^abs)`.
fn log_one_plus(z: &PadicNumber, abs: i64) -> PadicNumber {
    let p = z.prime();
    let vz = z.valuation();
    debug_assert!(vz >= 1);
    let mut sum = PadicNumber::zero(p, abs);
    let mut power = z.clone();
    let mut n: u64 = 1;
    // n·v(z) − floor(log_p n) is nondecreasing and bounds v(z^n / n) from below.
    while (n as i64) * vz - (ilog_p(n, p as u64) as i64) < abs {
        let term = power.div_int(&BigInt::from(n)).expect("n ≥ 1");
        sum = if n % 2 == 1 { &sum + &term } else { &sum - &term };
        power = &power * z;
        n += 1;
    }
    sum.truncate_abs(abs)
}

/// `exp_p(x) = Σ x^n / n!`, defined for `v_p(x) ≥ 1`.
pub fn exp_p(x: &PadicNumber) -> Result<PadicNumber> {
    let p = x.prime();
    let abs = x.absolute_precision();
    if x.is_zero() {
        if abs < 1 {
            return Err(Error::Domain("exp_p argument not known to lie in pZ_p".into()));
        }
        return Ok(PadicNumber::one(p, abs as u32));
    }
    if x.valuation() < 1 {
        return Err(Error::Domain(format!("exp_p needs v_p(x) ≥ 1, got {}", x.valuation())));
    }
    let vx = x.valuation();
    let mut sum = PadicNumber::one(p, abs as u32);
    let mut term = PadicNumber::one(p, abs as u32);
    let mut n: i64 = 1;
    // v(x^n/n!) ≥ n·v(x) − (n−1)/(p−1), increasing in n.
    while n * vx - (n - 1) / (p as i64 - 1) < abs {
        term = (&term * x).div_int(&BigInt::from(n))?;
        sum = &sum + &term;
        n += 1;
    }
    Ok(sum.truncate_abs(abs))
}

/// Evaluation route for `u^s` on principal units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerMethod {
    ExpLog,
    Binomial,
}

fn check_exponent(s: &PadicNumber) -> Result<()> {
    // |s| < p^((p-2)/(p-1)) < p forces v(s) ≥ 0 for elements of Q_p.
    if !s.is_zero() && s.valuation() < 0 {
        return Err(Error::Domain(format!(
            "exponent with v_p(s) = {} outside the convergence disc",
            s.valuation()
        )));
    }
    Ok(())
}

/// `u^s` for `u ≡ 1 mod p` and `s ∈ Z_p`.
pub fn one_unit_power(u: &PadicNumber, s: &PadicNumber, method: PowerMethod) -> Result<PadicNumber> {
    let p = u.prime();
    if u.is_zero() || u.valuation() != 0 {
        return Err(Error::NotAUnit("one_unit_power"));
    }
    let abs = u.absolute_precision();
    let z = u - &PadicNumber::one(p, abs as u32);
    if !z.is_zero() && z.valuation() < 1 {
        return Err(Error::Domain("base is not ≡ 1 mod p".into()));
    }
    check_exponent(s)?;
    match method {
        PowerMethod::ExpLog => {
            if z.is_zero() {
                return Ok(PadicNumber::one(p, abs as u32));
            }
            let log = log_one_plus(&z, abs);
            exp_p(&(s * &log))
        }
        PowerMethod::Binomial => {
            let mut sum = PadicNumber::one(p, abs as u32);
            if z.is_zero() {
                return Ok(sum);
            }
            let vz = z.valuation();
            let mut coeff = PadicNumber::one(p, abs as u32).lift_abs(abs + 64);
            let mut power = PadicNumber::one(p, abs as u32);
            let mut n: i64 = 1;
            // binom(s, n) ∈ Z_p, so each term has valuation ≥ n·v(z).
            while n * vz < abs {
                let s_minus = s.add_ratio(&(-num_rational::BigRational::from_integer(BigInt::from(n - 1))));
                coeff = (&coeff * &s_minus).div_int(&BigInt::from(n))?;
                power = &power * &z;
                sum = &sum + &(&coeff * &power);
                n += 1;
            }
            Ok(sum.truncate_abs(abs))
        }
    }
}

/// `binom(s, n) = s(s-1)⋯(s-n+1) / n!`; the result precision reflects the `v_p(n!)` loss.
pub fn padic_binom(s: &PadicNumber, n: u64) -> PadicNumber {
    let p = s.prime();
    let abs = s.absolute_precision().max(1);
    let mut acc = PadicNumber::one(p, abs as u32).lift_abs(abs + 64);
    for j in 0..n {
        let factor = s.add_ratio(&(-num_rational::BigRational::from_integer(BigInt::from(j))));
        acc = (&acc * &factor).div_int(&BigInt::from(j + 1)).expect("j+1 ≥ 1");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, p: u32, k: u32) -> PadicNumber {
        PadicNumber::from_rational(a, b, p, k).unwrap()
    }

    #[test]
    fn decompose_one() {
        let d = unit_decompose(&q(1, 1, 5, 3)).unwrap();
        assert_eq!(d.valuation, 0);
        assert_eq!(d.teichmuller.unit(), &BigUint::from(1u32));
        assert_eq!(d.one_unit.unit(), &BigUint::from(1u32));
    }

    #[test]
    fn teichmuller_of_two_mod_125() {
        let d = unit_decompose(&q(2, 1, 5, 3)).unwrap();
        assert_eq!(d.teichmuller.unit(), &BigUint::from(57u32));
        assert_eq!(d.teichmuller.pow(4), PadicNumber::one(5, 3));
        let expect = q(2, 1, 5, 3).div(&PadicNumber::from_int(5, 57, 3)).unwrap();
        assert_eq!(d.one_unit, expect);
    }

    #[test]
    fn one_unit_input_is_its_own_principal_part() {
        let d = unit_decompose(&q(6, 1, 5, 4)).unwrap();
        assert_eq!(d.teichmuller, PadicNumber::one(5, 4));
        assert_eq!(d.one_unit, q(6, 1, 5, 4));
    }

    #[test]
    fn decompose_zero_fails() {
        assert!(unit_decompose(&PadicNumber::zero(5, 3)).is_err());
    }

    #[test]
    fn valuation_is_split_off() {
        let x = q(50, 3, 5, 6);
        let d = unit_decompose(&x).unwrap();
        assert_eq!(d.valuation, 2);
        let back = (&d.teichmuller * &d.one_unit).shift(2);
        assert_eq!(back, x);
    }

    #[test]
    fn log_examples() {
        assert!(iwasawa_log(&q(1, 1, 5, 6)).unwrap().is_zero());
        let w2 = teichmuller(&q(2, 1, 5, 6)).unwrap();
        assert!(iwasawa_log(&w2).unwrap().is_zero());
        assert!(iwasawa_log(&q(5, 1, 5, 6)).is_err());
    }

    #[test]
    fn exp_log_round_trip_on_six() {
        let six = q(6, 1, 5, 10);
        let l = iwasawa_log(&six).unwrap();
        assert_eq!(l.valuation(), 1);
        assert_eq!(exp_p(&l).unwrap(), six);
    }

    #[test]
    fn exp_examples() {
        assert_eq!(exp_p(&PadicNumber::zero(5, 4)).unwrap(), PadicNumber::one(5, 4));
        let e5 = exp_p(&q(5, 1, 5, 3)).unwrap();
        assert_eq!(e5.to_residue(3).unwrap(), BigUint::from(81u32));
        assert!(exp_p(&q(1, 1, 5, 3)).is_err());
        let six = q(6, 1, 5, 8);
        assert_eq!(exp_p(&iwasawa_log(&six).unwrap()).unwrap(), six);
    }

    #[test]
    fn exp_known_to_argument_precision() {
        let x = q(5, 1, 5, 8);
        assert_eq!(exp_p(&x).unwrap().absolute_precision(), x.absolute_precision());
    }

    #[test]
    fn power_examples() {
        let u = q(6, 1, 5, 8);
        for m in [PowerMethod::ExpLog, PowerMethod::Binomial] {
            assert_eq!(one_unit_power(&u, &PadicNumber::zero(5, 20), m).unwrap(), PadicNumber::one(5, 8));
            assert_eq!(one_unit_power(&u, &PadicNumber::from_int(5, 1, 20), m).unwrap(), u);
            assert_eq!(one_unit_power(&u, &PadicNumber::from_int(5, 2, 20), m).unwrap(), q(36, 1, 5, 8));
        }
    }

    #[test]
    fn power_rejects_bad_inputs() {
        let s = q(1, 5, 5, 8);
        assert!(one_unit_power(&q(6, 1, 5, 8), &s, PowerMethod::ExpLog).is_err());
        assert!(one_unit_power(&q(2, 1, 5, 8), &q(1, 1, 5, 8), PowerMethod::Binomial).is_err());
    }

    #[test]
    fn square_root_of_principal_unit() {
        let u = q(11, 1, 5, 10);
        let half = q(1, 2, 5, 12);
        let r1 = one_unit_power(&u, &half, PowerMethod::ExpLog).unwrap();
        let r2 = one_unit_power(&u, &half, PowerMethod::Binomial).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(&r1 * &r1, u);
    }

    #[test]
    fn binomial_examples() {
        for m in 0..6 {
            assert_eq!(padic_binom(&PadicNumber::from_int(5, m, 10), m as u64), PadicNumber::one(5, 10));
        }
        for n in 0..7u64 {
            let expect = PadicNumber::from_int(7, if n % 2 == 0 { 1 } else { -1 }, 8);
            assert_eq!(padic_binom(&PadicNumber::from_int(7, -1, 8), n), expect);
        }
        assert_eq!(padic_binom(&q(1, 2, 5, 8), 2), q(-1, 8, 5, 8));
    }

    #[test]
    fn binomial_reports_factorial_loss() {
        let s = q(1, 3, 5, 6);
        let b = padic_binom(&s, 5);
        assert!(b.absolute_precision() <= 6);
        assert!(b.absolute_precision() >= 5);
    }
}
