use std::fmt::Debug;
use std::hash::Hash;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest modulus accepted by [`PrimeField`]. Products of two reduced
/// elements must fit in a `u64`.
pub const MAX_MODULUS: u64 = (1 << 32) - 5;

/// Default prime used throughout campaigns and the CLI.
pub const DEFAULT_MODULUS: u64 = 10007;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus must be nonzero")]
    ZeroModulus,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported maximum {MAX_MODULUS}")]
    TooLarge(u64),
}

/// A coefficient field. The field value itself is the context (for example
/// the modulus); elements are plain values interpreted against it.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_u64(&self, v: u64) -> Self::Elem;
    /// Zero for the rationals.
    fn characteristic(&self) -> u64;
    /// Reads an unsigned decimal integer (or `a/b` where the field allows it).
    fn parse_literal(&self, text: &str) -> Option<Self::Elem>;
    /// Sign and magnitude used by the renderer.
    fn display_parts(&self, a: &Self::Elem) -> (bool, String);

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `k!` as a field element (zero when the characteristic divides it).
    fn factorial(&self, k: u64) -> Self::Elem {
        (1..=k).fold(self.one(), |acc, i| self.mul(&acc, &self.from_u64(i)))
    }
}

/// The prime field `F_p` with `p < 2^32`; elements are canonical
/// representatives in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p == 0 {
            return Err(FieldError::ZeroModulus);
        }
        if p > MAX_MODULUS {
            return Err(FieldError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> u64 {
        v % self.p
    }

    /// Every element of the field, in increasing order of representative.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_MODULUS }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on signed values
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i64) as u64)
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_u64(&self, v: u64) -> u64 {
        v % self.p
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn parse_literal(&self, text: &str) -> Option<u64> {
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        // reduce digit by digit so arbitrarily long literals are accepted
        Some(text.bytes().fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % self.p))
    }
    fn display_parts(&self, a: &u64) -> (bool, String) {
        if *a > self.p / 2 {
            (true, (self.p - a).to_string())
        } else {
            (false, a.to_string())
        }
    }
}

/// The rational numbers, for small hand-checked examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_u64(&self, v: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn parse_literal(&self, text: &str) -> Option<BigRational> {
        let parse_int = |s: &str| -> Option<BigInt> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            s.parse::<BigInt>().ok()
        };
        match text.split_once('/') {
            None => parse_int(text).map(BigRational::from_integer),
            Some((n, d)) => {
                let d = parse_int(d)?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(parse_int(n)?, d))
            }
        }
    }
    fn display_parts(&self, a: &BigRational) -> (bool, String) {
        let mag = a.abs();
        let s = if mag.denom().is_one() {
            mag.numer().to_string()
        } else {
            format!("{}/{}", mag.numer(), mag.denom())
        };
        (a.is_negative(), s)
    }
}

/// Converts a small nonnegative rational back to an integer when exact.
pub fn rational_to_i64(a: &BigRational) -> Option<i64> {
    if a.denom().is_one() {
        a.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(PrimeField::new(0), Err(FieldError::ZeroModulus));
        assert_eq!(PrimeField::new(10), Err(FieldError::NotPrime(10)));
        assert_eq!(PrimeField::new(1), Err(FieldError::NotPrime(1)));
        assert!(PrimeField::new(10007).is_ok());
        assert!(matches!(PrimeField::new(1 << 40), Err(FieldError::TooLarge(_))));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = PrimeField::new(10007).unwrap();
        for a in 1..200u64 {
            let ai = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &ai), 1);
        }
        assert_eq!(f.inv(&0), None);
    }

    #[test]
    fn literal_reduction() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.parse_literal("15"), Some(1));
        assert_eq!(f.parse_literal("123456789012345678901234567890"), Some(
            (0..).zip("123456789012345678901234567890".bytes()).fold(0u64, |a, (_, b)| (a * 10 + (b - b'0') as u64) % 7)
        ));
        assert_eq!(f.parse_literal("x"), None);
        assert_eq!(f.display_parts(&6), (true, "1".into()));
    }

    #[test]
    fn factorial_vanishes_in_small_characteristic() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(f.factorial(2), 2);
        assert_eq!(f.factorial(3), 0);
        assert_eq!(Rationals.factorial(5), Rationals.from_u64(120));
    }
}
