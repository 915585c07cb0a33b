//! Exact scalar fields.
//!
//! Everything downstream is generic over [`Field`]. Two implementations are
//! provided: a prime field with a configurable modulus and the rationals.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{DmsError, Result};

/// Default modulus, the Mersenne prime 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// A uniformly random element from the sampling set.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Size of the set [`Field::random`] draws from. Drives the
    /// Schwartz-Zippel trial count in the isomorphism test.
    fn sample_size(&self) -> u64;

    fn render(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Moduli are limited to 32 bits so products fit in a `u64`.
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(DmsError::Input(format!(
                "modulus {p} must be a prime below 2^32"
            )));
        }
        if p < 1 << 14 {
            return Err(DmsError::Input(format!(
                "modulus {p} is too small; use a prime of at least 15 bits"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn name(&self) -> String {
        format!("GF({})", self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn sample_size(&self) -> u64 {
        self.p
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let v: i64 = s
            .trim()
            .parse()
            .map_err(|_| DmsError::Input(format!("bad residue '{s}'")))?;
        Ok(self.from_i64(v))
    }
}

/// Rational numbers with arbitrary precision.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

const RATIONAL_SAMPLE_BITS: u32 = 31;

impl Field for Rationals {
    type Elem = BigRational;

    fn name(&self) -> String {
        "Q".to_string()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let half = 1i64 << (RATIONAL_SAMPLE_BITS - 1);
        self.from_i64(rng.gen_range(-half..half))
    }
    fn sample_size(&self) -> u64 {
        1 << RATIONAL_SAMPLE_BITS
    }
    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else if a.is_negative() {
            format!("-{}/{}", a.numer().abs(), a.denom())
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        let bad = || DmsError::Input(format!("bad rational '{s}'"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_inverse() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let a = f.random(&mut rng);
            if a == 0 {
                continue;
            }
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.from_i64(-1), DEFAULT_PRIME - 1);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(PrimeField::new(65_536).is_err());
        assert!(PrimeField::new(7).is_err());
        assert!(PrimeField::new(32_749).is_ok());
    }

    #[test]
    fn rational_round_trip() {
        let q = Rationals;
        let x = q.parse("-3/6").unwrap();
        assert_eq!(q.render(&x), "-1/2");
        assert_eq!(q.render(&q.mul(&x, &q.from_i64(-2))), "1");
        assert!(q.parse("1/0").is_err());
    }
}
