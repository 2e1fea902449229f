//! Checkpointed level sums over the units below `p^n`.
//!
//! The zeta and `γ_p` level-sum formulas all reduce to
//! `Σ_{m < p^n, p ∤ m} ω(m)^e m^T` (optionally weighted by `(−1)^m`) for an
//! integer exponent `T`. Splitting by `c = m mod p` gives
//! `Σ_c ω(c)^e Σ_{m ≡ c} m^T`, so one pass produces the class sums for every
//! Teichmüller twist at once, and checkpoints at `m = p^n` give all levels.

use num_bigint::BigUint;

use crate::padic::{ppow, teichmuller_residue};
use crate::residue::{run_mod, Kernel, ResidueRing};

/// Class sums at one level, indexed by `c - 1` for `c = 1..p-1`, modulo `p^w`.
pub(crate) struct ClassSums {
    pub level: u32,
    /// `Σ_{m ≡ c} m^(T + extra)`
    pub plain: Vec<BigUint>,
    /// `Σ_{m ≡ c} (−1)^m m^T`
    pub signed: Vec<BigUint>,
}

struct PowerSums<F> {
    p: u32,
    exponent: BigUint,
    plain_extra: bool,
    max_level: u32,
    on_level: F,
}

impl<F: FnMut(&ClassSums) -> bool> Kernel for PowerSums<F> {
    type Output = u64;

    fn run<R: ResidueRing>(mut self, ring: &R) -> u64 {
        let p = self.p as u64;
        let classes = self.p as usize - 1;
        let mut plain = vec![ring.zero(); classes];
        let mut signed = vec![ring.zero(); classes];
        let mut count = 0u64;
        let mut start = 1u64;
        for level in 1..=self.max_level {
            let end = p.pow(level);
            for m in start..end {
                let c = (m % p) as usize;
                if c == 0 {
                    continue;
                }
                let xm = ring.from_u64(m);
                let x = ring.pow_big(&xm, &self.exponent);
                let px = if self.plain_extra { ring.mul(&x, &xm) } else { x.clone() };
                plain[c - 1] = ring.add(&plain[c - 1], &px);
                signed[c - 1] = if m % 2 == 0 { ring.add(&signed[c - 1], &x) } else { ring.sub(&signed[c - 1], &x) };
                count += 1;
            }
            start = end;
            let sums = ClassSums {
                level,
                plain: plain.iter().map(|x| ring.to_big(x)).collect(),
                signed: signed.iter().map(|x| ring.to_big(x)).collect(),
            };
            if (self.on_level)(&sums) {
                break;
            }
        }
        count
    }
}

/// Runs the class-sum pass modulo `p^w` for `m^T`, `T = exponent`, calling `on_level`
/// after each level until it returns `true` or `max_level` is reached.
/// Returns the number of residues visited.
pub(crate) fn class_power_sums(
    p: u32,
    w: u32,
    exponent: &BigUint,
    plain_extra: bool,
    max_level: u32,
    on_level: impl FnMut(&ClassSums) -> bool,
) -> u64 {
    run_mod(p, w, PowerSums { p, exponent: exponent.clone(), plain_extra, max_level, on_level })
}

/// `Σ_c ω(c)^e x_c mod p^w`.
pub(crate) fn twist(p: u32, w: u32, e: i64, sums: &[BigUint]) -> BigUint {
    let modulus = ppow(p, w);
    let e = BigUint::from(e.rem_euclid(p as i64 - 1) as u64);
    sums.iter()
        .enumerate()
        .map(|(i, x)| teichmuller_residue(&BigUint::from(i as u64 + 1), p, w).modpow(&e, &modulus) * x)
        .sum::<BigUint>()
        % modulus
}

struct UnitProducts<F> {
    p: u32,
    max_level: u32,
    on_level: F,
}

impl<F: FnMut(u32, BigUint) -> bool> Kernel for UnitProducts<F> {
    type Output = u64;

    fn run<R: ResidueRing>(mut self, ring: &R) -> u64 {
        let p = self.p as u64;
        let mut acc = ring.one();
        let mut start = 1u64;
        let mut count = 0;
        for level in 1..=self.max_level {
            let end = p.pow(level);
            for m in start..end {
                if m % p != 0 {
                    acc = ring.mul(&acc, &ring.from_u64(m));
                    count += 1;
                }
            }
            start = end;
            if (self.on_level)(level, ring.to_big(&acc)) {
                break;
            }
        }
        count
    }
}

/// `Π_{m < p^n, p ∤ m} m mod p^w` for `n = 1, 2, …`, reported level by level.
pub(crate) fn unit_products(p: u32, w: u32, max_level: u32, on_level: impl FnMut(u32, BigUint) -> bool) -> u64 {
    run_mod(p, w, UnitProducts { p, max_level, on_level })
}
