use std::cmp::min;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Upper bound on significant digits carried by a single value.
pub const MAX_DIGITS: u32 = 4096;

pub(crate) fn ppow(p: u32, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

/// Splits `n = p^v * m` with `p ∤ m`; `n` must be nonzero.
pub(crate) fn split_p(n: &BigUint, p: u32) -> (u32, BigUint) {
    debug_assert!(!n.is_zero());
    let pb = BigUint::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

#[cfg(test)]
pub(crate) fn vp_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// `floor(log_p n)` for `n ≥ 1`.
pub(crate) fn ilog_p(n: u64, p: u64) -> u32 {
    let mut k = 0;
    let mut q = p;
    while q <= n {
        k += 1;
        q = match q.checked_mul(p) {
            Some(x) => x,
            None => break,
        };
    }
    k
}

fn reduce_signed(x: &BigInt, m: &BigUint) -> BigUint {
    let mb = BigInt::from_biguint(Sign::Plus, m.clone());
    x.mod_floor(&mb).to_biguint().expect("mod_floor is nonnegative")
}

pub(crate) fn inv_mod(x: &BigUint, m: &BigUint) -> BigUint {
    if m.is_one() {
        return BigUint::zero();
    }
    x.modinv(m).expect("unit is invertible modulo p^k")
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Default residue budget for enumerated level sums (`p^n` evaluations).
pub const DEFAULT_RESIDUE_BUDGET: u64 = 10_000_000;

/// Prime, default precision and level caps shared by a computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicContext {
    prime: u32,
    precision: u32,
    level_cap: u32,
    residue_budget: u64,
}

impl PadicContext {
    pub fn new(prime: u32, precision: u32, level_cap: u32) -> Result<Self> {
        if prime == 2 || !is_prime(prime as u64) {
            return Err(Error::InvalidPrime(prime as u64));
        }
        if precision == 0 || precision > MAX_DIGITS {
            return Err(Error::InvalidContext(format!("precision {precision} out of range 1..={MAX_DIGITS}")));
        }
        if level_cap == 0 {
            return Err(Error::InvalidContext("level cap must be at least 1".into()));
        }
        Ok(PadicContext { prime, precision, level_cap, residue_budget: DEFAULT_RESIDUE_BUDGET })
    }

    pub fn with_residue_budget(mut self, budget: u64) -> Self {
        self.residue_budget = budget.max(1);
        self
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        let mut c = PadicContext::new(self.prime, precision, self.level_cap)?;
        c.residue_budget = self.residue_budget;
        Ok(c)
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn level_cap(&self) -> u32 {
        self.level_cap
    }

    pub fn residue_budget(&self) -> u64 {
        self.residue_budget
    }

    /// Deepest level allowed for enumerated sums: `min(level_cap, max{n : p^n ≤ budget})`.
    pub fn max_level(&self) -> u32 {
        min(self.level_cap, ilog_p(self.residue_budget, self.prime as u64)).max(1)
    }

    pub fn from_rational(&self, a: i64, b: i64) -> Result<PadicNumber> {
        PadicNumber::from_rational(a, b, self.prime, self.precision)
    }

    pub fn from_int(&self, n: i64) -> PadicNumber {
        PadicNumber::from_int(self.prime, n, self.precision)
    }
}

/// An element of `Q_p` known to finite precision.
///
/// A nonzero value is `p^val * unit + O(p^(val + prec))` with `p ∤ unit` and
/// `0 < unit < p^prec`. Zero is stored as `unit = 0, prec = 0` and `val` equal
/// to its absolute precision, i.e. the value `O(p^val)`. Precision propagates
/// pessimistically: products keep the smaller significant-digit count and sums
/// keep the smaller absolute precision.
#[derive(Clone, Debug)]
pub struct PadicNumber {
    p: u32,
    val: i64,
    unit: BigUint,
    prec: u32,
}

impl PadicNumber {
    pub fn zero(p: u32, absolute_precision: i64) -> Self {
        PadicNumber { p, val: absolute_precision, unit: BigUint::zero(), prec: 0 }
    }

    pub fn one(p: u32, prec: u32) -> Self {
        Self::from_int(p, 1, prec)
    }

    pub fn from_int(p: u32, n: i64, prec: u32) -> Self {
        Self::from_bigint(p, &BigInt::from(n), prec)
    }

    /// Integer to `prec` significant digits. Zero becomes `O(p^prec)`.
    pub fn from_bigint(p: u32, n: &BigInt, prec: u32) -> Self {
        if n.is_zero() {
            return Self::zero(p, prec as i64);
        }
        let (v, m) = split_p(n.magnitude(), p);
        let modulus = ppow(p, prec);
        let signed = if n.is_negative() { -BigInt::from(m) } else { BigInt::from(m) };
        PadicNumber { p, val: v as i64, unit: reduce_signed(&signed, &modulus), prec }
    }

    /// `a / b` to `prec` significant digits.
    pub fn from_rational(a: impl Into<BigInt>, b: impl Into<BigInt>, p: u32, prec: u32) -> Result<Self> {
        let (a, b) = (a.into(), b.into());
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_ratio(&BigRational::new(a, b), p, prec))
    }

    pub fn from_ratio(r: &BigRational, p: u32, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero(p, prec as i64);
        }
        let (va, a) = split_p(r.numer().magnitude(), p);
        let (vb, b) = split_p(r.denom().magnitude(), p);
        let modulus = ppow(p, prec);
        let mut unit = (a % &modulus) * inv_mod(&(b % &modulus), &modulus) % &modulus;
        if r.is_negative() && !unit.is_zero() {
            unit = &modulus - unit;
        }
        PadicNumber { p, val: va as i64 - vb as i64, unit, prec }
    }

    /// Rational known modulo `p^abs`.
    pub fn from_ratio_abs(r: &BigRational, p: u32, abs: i64) -> Self {
        if r.is_zero() {
            return Self::zero(p, abs);
        }
        let v = ratio_valuation(r, p);
        if abs <= v {
            return Self::zero(p, abs);
        }
        Self::from_ratio(r, p, (abs - v) as u32)
    }

    /// The integer `x` read modulo `p^abs` (`abs ≥ 0`).
    pub fn from_residue(p: u32, x: &BigUint, abs: i64) -> Self {
        Self::normalize(p, 0, x.clone(), abs.max(0) as u32)
    }

    /// Builds `p^val * unit + O(p^(val+prec))`; `unit` is reduced and must be prime to `p`.
    pub fn from_parts(p: u32, val: i64, unit: BigUint, prec: u32) -> Result<Self> {
        if prec == 0 {
            return Ok(Self::zero(p, val));
        }
        let unit = unit % ppow(p, prec);
        if (&unit % p).is_zero() {
            return Err(Error::Domain("unit part divisible by p".into()));
        }
        Ok(PadicNumber { p, val, unit, prec })
    }

    /// Value from base-`p` digits `d_0, d_1, ...` of `x / p^val`, known to `O(p^abs)`.
    pub fn from_digits(p: u32, val: i64, digits: &[u32], abs: i64) -> Result<Self> {
        let n = (abs - val).max(0);
        if digits.len() as i64 > n {
            return Err(Error::Parse("more digits than precision".into()));
        }
        let mut acc = BigUint::zero();
        for &d in digits.iter().rev() {
            if d >= p {
                return Err(Error::Parse(format!("digit {d} out of range for p = {p}")));
            }
            acc = acc * p + d;
        }
        if acc.is_zero() {
            return Ok(Self::zero(p, abs));
        }
        let x = Self::normalize(p, val, acc, n as u32);
        if x.val != val {
            return Err(Error::Parse("leading digit must be nonzero".into()));
        }
        Ok(x)
    }

    /// `p^vmin * s` known modulo `p^(vmin + n)`.
    fn normalize(p: u32, vmin: i64, s: BigUint, n: u32) -> Self {
        let s = s % ppow(p, n);
        if s.is_zero() {
            return Self::zero(p, vmin + n as i64);
        }
        let (t, unit) = split_p(&s, p);
        PadicNumber { p, val: vmin + t as i64, unit, prec: n - t }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// `v_p(x)`; for a zero value this is the lower bound given by its precision.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    /// Number of significant digits.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// `m` such that the value is known modulo `p^m`.
    pub fn absolute_precision(&self) -> i64 {
        self.val + self.prec as i64
    }

    pub fn is_zero(&self) -> bool {
        self.prec == 0
    }

    /// `|x|_p` as the exponent `e` in `p^e`, or `None` for a zero value.
    pub fn norm_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(-self.val)
        }
    }

    /// Drops digits so that the value is known only modulo `p^abs`.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        if abs >= self.absolute_precision() {
            return self.clone();
        }
        if abs <= self.val || self.is_zero() {
            return Self::zero(self.p, min(abs, self.absolute_precision()));
        }
        let prec = (abs - self.val) as u32;
        PadicNumber { p: self.p, val: self.val, unit: &self.unit % ppow(self.p, prec), prec }
    }

    /// Treats unknown digits as zero, raising the precision to `abs`.
    /// Only sound when the value is exact (e.g. a rational constant).
    pub fn lift_abs(&self, abs: i64) -> Self {
        if abs <= self.absolute_precision() {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero(self.p, abs);
        }
        PadicNumber { p: self.p, val: self.val, unit: self.unit.clone(), prec: (abs - self.val) as u32 }
    }

    /// Representative in `[0, p^abs)` of a value with nonnegative valuation.
    pub fn to_residue(&self, abs: u32) -> Result<BigUint> {
        if self.val < 0 && !self.is_zero() {
            return Err(Error::Domain("value is not a p-adic integer".into()));
        }
        if (abs as i64) > self.absolute_precision() {
            return Err(Error::InsufficientPrecision(format!(
                "value known mod p^{} but p^{} requested",
                self.absolute_precision(),
                abs
            )));
        }
        if self.is_zero() {
            return Ok(BigUint::zero());
        }
        Ok((&self.unit * ppow(self.p, self.val as u32)) % ppow(self.p, abs))
    }

    /// Exact rational value of the stored representative `p^val * unit`.
    pub fn to_ratio(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let u = BigInt::from(self.unit.clone());
        if self.val >= 0 {
            BigRational::from_integer(u * BigInt::from(ppow(self.p, self.val as u32)))
        } else {
            BigRational::new(u, BigInt::from(ppow(self.p, (-self.val) as u32)))
        }
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "p-adic operands over different primes");
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.check_prime(other);
        let abs = min(self.absolute_precision(), other.absolute_precision());
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Self::zero(self.p, abs),
            (true, false) => return other.truncate_abs(abs),
            (false, true) => return self.truncate_abs(abs),
            _ => {}
        }
        let vmin = min(self.val, other.val);
        if abs <= vmin {
            return Self::zero(self.p, abs);
        }
        let n = (abs - vmin) as u32;
        let a = &self.unit * ppow(self.p, (self.val - vmin) as u32);
        let b = &other.unit * ppow(self.p, (other.val - vmin) as u32);
        Self::normalize(self.p, vmin, a + b, n)
    }

    pub fn neg_ref(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = ppow(self.p, self.prec);
        PadicNumber { p: self.p, val: self.val, unit: m - &self.unit, prec: self.prec }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.check_prime(other);
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Self::zero(self.p, self.val + other.val),
            (true, false) => return Self::zero(self.p, self.val + other.val),
            (false, true) => return Self::zero(self.p, self.val + other.val),
            _ => {}
        }
        let prec = min(self.prec, other.prec);
        let m = ppow(self.p, prec);
        PadicNumber { p: self.p, val: self.val + other.val, unit: (&self.unit * &other.unit) % m, prec }
    }

    /// Division; fails when the divisor is indistinguishable from zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other);
        if other.is_zero() {
            return Err(Error::InsufficientPrecision(format!(
                "divisor is O({}^{})",
                other.p, other.val
            )));
        }
        if self.is_zero() {
            return Ok(Self::zero(self.p, self.val - other.val));
        }
        let prec = min(self.prec, other.prec);
        let m = ppow(self.p, prec);
        let inv = inv_mod(&(&other.unit % &m), &m);
        Ok(PadicNumber { p: self.p, val: self.val - other.val, unit: (&self.unit * inv) % m, prec })
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::one(self.p, self.prec.max(1)).div(self)
    }

    /// Multiplication by an exact integer.
    pub fn mul_int(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero(self.p, self.absolute_precision().max(self.val));
        }
        let (v, m) = split_p(n.magnitude(), self.p);
        if self.is_zero() {
            return Self::zero(self.p, self.val + v as i64);
        }
        let modulus = ppow(self.p, self.prec);
        let mut unit = (&self.unit * (m % &modulus)) % &modulus;
        if n.is_negative() {
            unit = (&modulus - unit) % &modulus;
        }
        PadicNumber { p: self.p, val: self.val + v as i64, unit, prec: self.prec }
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        self.mul_int(&BigInt::from(n))
    }

    /// Division by an exact nonzero integer.
    pub fn div_int(&self, n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (v, m) = split_p(n.magnitude(), self.p);
        if self.is_zero() {
            return Ok(Self::zero(self.p, self.val - v as i64));
        }
        let modulus = ppow(self.p, self.prec);
        let mut unit = (&self.unit * inv_mod(&(m % &modulus), &modulus)) % &modulus;
        if n.is_negative() {
            unit = (&modulus - unit) % &modulus;
        }
        Ok(PadicNumber { p: self.p, val: self.val - v as i64, unit, prec: self.prec })
    }

    pub fn div_i64(&self, n: i64) -> Result<Self> {
        self.div_int(&BigInt::from(n))
    }

    /// Exact multiplication by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut r = self.clone();
        r.val += k;
        r
    }

    /// Product with an exact rational.
    pub fn mul_ratio(&self, r: &BigRational) -> Self {
        self.mul_int(r.numer()).div_int(r.denom()).expect("denominator is nonzero")
    }

    /// Sum with an exact rational.
    pub fn add_ratio(&self, r: &BigRational) -> Self {
        let abs = self.absolute_precision();
        self.add_ref(&Self::from_ratio_abs(r, self.p, abs))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(self.p, self.prec.max(1));
        if self.is_zero() && e > 0 {
            return Self::zero(self.p, self.val * e as i64);
        }
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// `v_p(x - y)`, capped at the shared absolute precision.
    pub fn agreement(&self, other: &Self) -> i64 {
        self.sub_ref(other).valuation()
    }

    /// `true` when `x - y` is `O(p^m)` at the shared precision.
    pub fn indistinguishable(&self, other: &Self) -> bool {
        self.sub_ref(other).is_zero()
    }

    /// Little-endian base-`p` digits of `x / p^val`; exactly `precision()` of them.
    pub fn digits(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.prec as usize);
        let mut u = self.unit.clone();
        let pb = BigUint::from(self.p);
        for _ in 0..self.prec {
            let (q, r) = u.div_rem(&pb);
            out.push(r.to_u32().expect("digit below p"));
            u = q;
        }
        out
    }
}

pub(crate) fn ratio_valuation(r: &BigRational, p: u32) -> i64 {
    let (va, _) = split_p(r.numer().magnitude(), p);
    let (vb, _) = split_p(r.denom().magnitude(), p);
    va as i64 - vb as i64
}

impl PartialEq for PadicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.indistinguishable(other)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: &PadicNumber) -> PadicNumber {
                self.$inner(rhs)
            }
        }
        impl $trait<PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: PadicNumber) -> PadicNumber {
                (&self).$inner(&rhs)
            }
        }
        impl $trait<&PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: &PadicNumber) -> PadicNumber {
                (&self).$inner(rhs)
            }
        }
        impl $trait<PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: PadicNumber) -> PadicNumber {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_ref()
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_ref()
    }
}

const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

pub(crate) fn superscript(e: i64) -> String {
    let mut s = String::new();
    if e < 0 {
        s.push('⁻');
    }
    for c in e.unsigned_abs().to_string().chars() {
        s.push(SUPERSCRIPTS[c.to_digit(10).unwrap() as usize]);
    }
    s
}

fn power_term(p: u32, e: i64) -> String {
    if e == 1 {
        p.to_string()
    } else {
        format!("{p}{}", superscript(e))
    }
}

/// `d_v·p^v + … + O(p^(v+k))` with zero digits omitted.
impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, d) in self.digits().into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            let e = self.val + i as i64;
            terms.push(match (e, d) {
                (0, _) => d.to_string(),
                (_, 1) => power_term(self.p, e),
                _ => format!("{d}·{}", power_term(self.p, e)),
            });
        }
        terms.push(format!("O({})", power_term(self.p, self.absolute_precision())));
        write!(f, "{}", terms.join(" + "))
    }
}

/// Canonical digit expansion, as rendered by `Display`.
pub fn to_digits(x: &PadicNumber) -> String {
    x.to_string()
}
