//! Exact arithmetic in `Z/ℓ^k`.
//!
//! A [`ModulusContext`] fixes the prime `ℓ` and the precision `k`. Every
//! container in the crate (series, matrices, cochains) stores raw `u64`
//! representatives in `[0, ℓ^k)` next to its context; [`Residue`] is the
//! scalar handed across public APIs.

pub mod linalg;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible modulus; keeps every product of two residues inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawContext", into = "RawContext")]
pub struct ModulusContext {
    ell: u64,
    k: u32,
    modulus: u64,
}

#[derive(Serialize, Deserialize)]
struct RawContext {
    ell: u64,
    k: u32,
}

impl TryFrom<RawContext> for ModulusContext {
    type Error = Error;
    fn try_from(raw: RawContext) -> Result<Self> {
        ModulusContext::new(raw.ell, raw.k)
    }
}

impl From<ModulusContext> for RawContext {
    fn from(ctx: ModulusContext) -> Self {
        RawContext { ell: ctx.ell, k: ctx.k }
    }
}

impl fmt::Debug for ModulusContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.ell, self.k)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl ModulusContext {
    pub fn new(ell: u64, k: u32) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::InvalidModulus(format!("{ell} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidModulus("precision k must be positive".into()));
        }
        let mut modulus: u64 = 1;
        for _ in 0..k {
            modulus = modulus
                .checked_mul(ell)
                .filter(|m| *m < MAX_MODULUS)
                .ok_or_else(|| Error::InvalidModulus(format!("{ell}^{k} exceeds 2^31")))?;
        }
        Ok(ModulusContext { ell, k, modulus })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Checks that `m!` is a unit, i.e. `m < ℓ`.
    pub fn check_factorial_unit(&self, m: usize) -> Result<()> {
        if (m as u64) < self.ell {
            Ok(())
        } else {
            Err(Error::PrecisionViolation(format!(
                "{m}! is not a unit modulo {}",
                self.ell
            )))
        }
    }

    pub fn residue(&self, value: i64) -> Residue {
        Residue { value: self.reduce(value), ctx: *self }
    }

    pub fn zero(&self) -> Residue {
        Residue { value: 0, ctx: *self }
    }

    pub fn one(&self) -> Residue {
        Residue { value: 1 % self.modulus, ctx: *self }
    }

    pub(crate) fn wrap(&self, value: u64) -> Residue {
        debug_assert!(value < self.modulus);
        Residue { value, ctx: *self }
    }

    // Raw arithmetic on canonical representatives.

    pub fn reduce(&self, value: i64) -> u64 {
        value.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.modulus
    }

    #[inline]
    pub fn mul_add(&self, acc: u64, a: u64, b: u64) -> u64 {
        (acc + a * b) % self.modulus
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut result = 1 % self.modulus;
        let mut b = base % self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        result
    }

    /// Signed exponent; negative exponents require a unit base.
    pub fn pow_signed(&self, base: u64, exp: i64) -> Result<u64> {
        if exp >= 0 {
            Ok(self.pow(base, exp as u64))
        } else {
            let inv = self.inv(base)?;
            Ok(self.pow(inv, exp.unsigned_abs()))
        }
    }

    /// ℓ-adic valuation of a representative; `k` for zero.
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.k;
        }
        let mut v = 0;
        let mut x = a;
        while x % self.ell == 0 {
            x /= self.ell;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.ell != 0
    }

    /// Inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit { value: a, modulus: self.modulus });
        }
        let (mut old_r, mut r) = (a as i64, self.modulus as i64);
        let (mut old_s, mut s) = (1i64, 0i64);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        Ok(self.reduce(old_s))
    }

    pub fn factorial(&self, m: usize) -> u64 {
        (1..=m as u64).fold(1 % self.modulus, |acc, i| self.mul(acc, i % self.modulus))
    }

    /// `1/m!`, defined when `m < ℓ`.
    pub fn inv_factorial(&self, m: usize) -> Result<u64> {
        self.check_factorial_unit(m)?;
        self.inv(self.factorial(m))
    }

    /// `C(c, m) = c(c-1)…(c-m+1)/m!` for a residue `c`.
    pub fn binomial(&self, c: u64, m: usize) -> Result<u64> {
        let inv = self.inv_factorial(m)?;
        let mut falling = 1 % self.modulus;
        for i in 0..m as u64 {
            falling = self.mul(falling, self.sub(c, i % self.modulus));
        }
        Ok(self.mul(falling, inv))
    }
}

/// An element of `Z/ℓ^k` tagged with its context.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    ctx: ModulusContext,
}

impl Residue {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn context(&self) -> ModulusContext {
        self.ctx
    }

    /// Symmetric representative in `(-ℓ^k/2, ℓ^k/2]`.
    pub fn signed(&self) -> i64 {
        let m = self.ctx.modulus;
        if self.value > m / 2 {
            self.value as i64 - m as i64
        } else {
            self.value as i64
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_unit(&self) -> bool {
        self.ctx.is_unit(self.value)
    }

    pub fn invert(&self) -> Result<Residue> {
        Ok(self.ctx.wrap(self.ctx.inv(self.value)?))
    }

    pub fn pow(&self, exp: u64) -> Residue {
        self.ctx.wrap(self.ctx.pow(self.value, exp))
    }

    pub fn binomial(&self, m: usize) -> Result<Residue> {
        Ok(self.ctx.wrap(self.ctx.binomial(self.value, m)?))
    }

    pub fn valuation(&self) -> u32 {
        self.ctx.valuation(self.value)
    }

    fn check(&self, other: &Residue) {
        assert_eq!(
            self.ctx, other.ctx,
            "residue arithmetic across different modulus contexts"
        );
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.ctx.modulus)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        self.ctx.wrap(self.ctx.add(self.value, rhs.value))
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        self.ctx.wrap(self.ctx.sub(self.value, rhs.value))
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        self.ctx.wrap(self.ctx.mul(self.value, rhs.value))
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        self.ctx.wrap(self.ctx.neg(self.value))
    }
}

impl AddAssign for Residue {
    fn add_assign(&mut self, rhs: Residue) {
        *self = *self + rhs;
    }
}

impl SubAssign for Residue {
    fn sub_assign(&mut self, rhs: Residue) {
        *self = *self - rhs;
    }
}

impl MulAssign for Residue {
    fn mul_assign(&mut self, rhs: Residue) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(ell: u64, k: u32) -> ModulusContext {
        ModulusContext::new(ell, k).unwrap()
    }

    /// Inverse by exhaustive search, independent of the Euclid path.
    fn brute_inverse(a: u64, m: u64) -> Option<u64> {
        (0..m).find(|b| (a * b) % m == 1)
    }

    fn integer_binomial(c: u64, m: u64) -> u64 {
        if m > c {
            return 0;
        }
        (0..m).fold(1u64, |acc, i| acc * (c - i) / (i + 1))
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(ModulusContext::new(4, 1).is_err());
        assert!(ModulusContext::new(5, 0).is_err());
        assert!(ModulusContext::new(2, 31).is_err());
        assert!(ModulusContext::new(2, 30).is_ok());
    }

    #[test]
    fn invert_examples() {
        let c = ctx(5, 1);
        assert_eq!(brute_inverse(2, 5), Some(3));
        assert_eq!(c.residue(2).invert().unwrap().value(), 3);
        assert_eq!(ctx(7, 3).one().invert().unwrap().value(), 1);
        assert_eq!(
            ctx(5, 2).residue(5).invert(),
            Err(Error::NonUnit { value: 5, modulus: 25 })
        );
    }

    #[test]
    fn binomial_examples() {
        let c = ctx(5, 1);
        // 4*3/2 = 6 = 1 mod 5
        assert_eq!(integer_binomial(4, 2) % 5, 1);
        assert_eq!(c.residue(4).binomial(2).unwrap().value(), 1);
        assert_eq!(c.residue(3).binomial(0).unwrap().value(), 1);
        assert_eq!(c.residue(1).binomial(2).unwrap().value(), 0);
        assert!(matches!(c.residue(1).binomial(5), Err(Error::PrecisionViolation(_))));
    }

    #[test]
    fn signed_representative() {
        let c = ctx(7, 1);
        assert_eq!(c.residue(-1).signed(), -1);
        assert_eq!(c.residue(3).signed(), 3);
        assert_eq!(c.residue(4).signed(), -3);
    }

    #[test]
    fn valuation_counts_factors() {
        let c = ctx(3, 3);
        assert_eq!(c.valuation(0), 3);
        assert_eq!(c.valuation(9), 2);
        assert_eq!(c.valuation(18), 2);
        assert_eq!(c.valuation(5), 0);
    }

    proptest! {
        #[test]
        fn inverse_is_involutive(ell in prop::sample::select(vec![3u64, 5, 7, 11, 13]), k in 1u32..4, a in 0u64..100_000) {
            let c = ctx(ell, k);
            let a = c.residue(a as i64);
            prop_assume!(a.is_unit());
            let inv = a.invert().unwrap();
            prop_assert_eq!((a * inv).value(), 1);
            prop_assert_eq!(inv.invert().unwrap(), a);
            prop_assert_eq!(Some(inv.value()), brute_inverse(a.value(), c.modulus()));
        }

        #[test]
        fn pascal_identity(ell in prop::sample::select(vec![7u64, 11, 13]), k in 1u32..4, c in 0i64..10_000, m in 1usize..7) {
            let ctx = ctx(ell, k);
            let c = ctx.residue(c);
            let one = ctx.one();
            let lhs = c.binomial(m).unwrap();
            let rhs = (c - one).binomial(m).unwrap() + (c - one).binomial(m - 1).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn binomial_matches_integers(ell in prop::sample::select(vec![7u64, 11, 13]), k in 1u32..4, c in 0u64..40, m in 0usize..7) {
            let ctx = ctx(ell, k);
            let expected = integer_binomial(c, m as u64) % ctx.modulus();
            prop_assert_eq!(ctx.residue(c as i64).binomial(m).unwrap().value(), expected);
        }
    }
}
