//! Integer arithmetic in `Z / p^w Z` for the hot level-sum loops.
//!
//! Level sums over `p^n` residues are the only expensive operations in the
//! crate. They run in one of two rings behind the [`ResidueRing`] trait:
//! a Montgomery ring on `u64` words when `p^w < 2^63`, otherwise a `BigUint`
//! ring. Kernels are written once against the trait and dispatched with
//! [`run_mod`].

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

pub(crate) trait ResidueRing {
    type Elem: Clone;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_u64(&self, x: u64) -> Self::Elem;
    fn to_big(&self, x: &Self::Elem) -> BigUint;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }

    fn pow_u64(&self, base: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut b = base.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    fn pow_big(&self, base: &Self::Elem, e: &BigUint) -> Self::Elem {
        if let Some(small) = e.to_u64() {
            return self.pow_u64(base, small);
        }
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, base);
            }
        }
        acc
    }
}

/// Montgomery arithmetic for an odd modulus below `2^63`.
pub(crate) struct MontRing {
    n: u64,
    n_prime: u64,
    r2: u64,
    one: u64,
}

impl MontRing {
    pub(crate) fn new(n: u64) -> Self {
        assert!(n & 1 == 1 && n < (1u64 << 63), "Montgomery modulus must be odd and < 2^63");
        let mut inv: u64 = n;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let n_prime = inv.wrapping_neg();
        let r = ((1u128 << 64) % n as u128) as u64;
        let r2 = ((r as u128 * r as u128) % n as u128) as u64;
        MontRing { n, n_prime, r2, one: r }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.n_prime);
        let u = ((t + m as u128 * self.n as u128) >> 64) as u64;
        if u >= self.n {
            u - self.n
        } else {
            u
        }
    }
}

impl ResidueRing for MontRing {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        self.one
    }
    #[inline]
    fn from_u64(&self, x: u64) -> u64 {
        self.redc((x % self.n) as u128 * self.r2 as u128)
    }
    fn to_big(&self, x: &u64) -> BigUint {
        BigUint::from(self.redc(*x as u128))
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.redc(*a as u128 * *b as u128)
    }
}

/// Fallback ring for moduli too large for a machine word.
pub(crate) struct BigRing {
    n: BigUint,
}

impl BigRing {
    pub(crate) fn new(n: BigUint) -> Self {
        BigRing { n }
    }
}

impl ResidueRing for BigRing {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one() % &self.n
    }
    fn from_u64(&self, x: u64) -> BigUint {
        BigUint::from(x) % &self.n
    }
    fn to_big(&self, x: &BigUint) -> BigUint {
        x.clone()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.n {
            s - &self.n
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + &self.n - b
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.n
    }
    fn pow_big(&self, base: &BigUint, e: &BigUint) -> BigUint {
        base.modpow(e, &self.n)
    }
    fn pow_u64(&self, base: &BigUint, e: u64) -> BigUint {
        base.modpow(&BigUint::from(e), &self.n)
    }
}

/// A computation that can run in any residue ring.
pub(crate) trait Kernel {
    type Output;
    fn run<R: ResidueRing>(self, ring: &R) -> Self::Output;
}

/// Runs `kernel` in `Z / p^w Z`, picking the word-sized ring when it fits.
pub(crate) fn run_mod<K: Kernel>(p: u32, w: u32, kernel: K) -> K::Output {
    let modulus = BigUint::from(p).pow(w);
    match modulus.to_u64() {
        Some(n) if n < (1u64 << 63) => kernel.run(&MontRing::new(n)),
        _ => kernel.run(&BigRing::new(modulus)),
    }
}
