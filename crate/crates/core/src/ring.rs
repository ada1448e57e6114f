//! Exact coefficient rings: the integers, the rationals, residue rings Z/n,
//! and prime fields F_p.
//!
//! Every element is stored as an arbitrary-precision rational held in the
//! canonical form of its ring (denominator 1 and, for modular rings, a
//! residue in 0..n-1). All arithmetic goes through the ring descriptor so
//! canonical forms are preserved.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};
use std::fmt;
use thiserror::Error;

/// Exact scalar. Rings other than the rationals keep the denominator at 1.
pub type Coeff = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(BigInt),
    #[error("{0} is not prime")]
    NotPrime(BigInt),
}

/// Descriptor of a supported coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Integers,
    IntegersMod(BigInt),
    Rationals,
    PrimeField(BigInt),
}

fn is_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    let mut d = two.clone();
    while &d * &d <= *n {
        if n.is_multiple_of(&d) {
            return false;
        }
        d += 1;
    }
    true
}

impl CoeffRing {
    pub fn integers() -> Self {
        CoeffRing::Integers
    }

    pub fn rationals() -> Self {
        CoeffRing::Rationals
    }

    pub fn integers_mod(n: impl Into<BigInt>) -> Result<Self, RingError> {
        let n = n.into();
        if n < BigInt::from(2) {
            return Err(RingError::ModulusTooSmall(n));
        }
        Ok(CoeffRing::IntegersMod(n))
    }

    pub fn prime_field(p: impl Into<BigInt>) -> Result<Self, RingError> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(RingError::NotPrime(p));
        }
        Ok(CoeffRing::PrimeField(p))
    }

    /// Modulus of a residue ring, if any.
    pub fn modulus(&self) -> Option<&BigInt> {
        match self {
            CoeffRing::IntegersMod(n) | CoeffRing::PrimeField(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, CoeffRing::Rationals | CoeffRing::PrimeField(_))
    }

    /// True for rings where division with remainder is available (SNF works).
    pub fn is_pid(&self) -> bool {
        match self {
            CoeffRing::Integers | CoeffRing::Rationals | CoeffRing::PrimeField(_) => true,
            CoeffRing::IntegersMod(n) => is_prime(n),
        }
    }

    pub fn zero(&self) -> Coeff {
        BigRational::zero()
    }

    pub fn one(&self) -> Coeff {
        self.normalize(BigRational::one())
    }

    pub fn from_i64(&self, x: i64) -> Coeff {
        self.normalize(BigRational::from(BigInt::from(x)))
    }

    pub fn from_int(&self, x: BigInt) -> Coeff {
        self.normalize(BigRational::from(x))
    }

    /// Canonical representative of `x` in this ring.
    ///
    /// Panics if `x` has a nontrivial denominator in an integral ring whose
    /// modulus shares a factor with it; callers only feed ring-born values.
    pub fn normalize(&self, x: BigRational) -> Coeff {
        match self {
            CoeffRing::Integers | CoeffRing::Rationals => x,
            CoeffRing::IntegersMod(n) | CoeffRing::PrimeField(n) => {
                let int = if x.denom().is_one() {
                    x.numer().clone()
                } else {
                    // Divide away the denominator modulo n; it must be a unit.
                    let d = x.denom().mod_floor(n);
                    let dinv = invert_mod(&d, n)
                        .expect("denominator not invertible modulo the ring modulus");
                    x.numer() * dinv
                };
                BigRational::from(int.mod_floor(n))
            }
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(a + b)
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(a - b)
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(a * b)
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        self.normalize(-a)
    }

    pub fn is_unit(&self, a: &Coeff) -> bool {
        self.inv(a).is_some()
    }

    pub fn inv(&self, a: &Coeff) -> Option<Coeff> {
        match self {
            CoeffRing::Rationals => (!a.is_zero()).then(|| a.recip()),
            CoeffRing::Integers => {
                let n = a.numer();
                (n.is_one() || (-n).is_one()).then(|| a.clone())
            }
            CoeffRing::IntegersMod(n) | CoeffRing::PrimeField(n) => {
                invert_mod(a.numer(), n).map(BigRational::from)
            }
        }
    }

    /// Some (a / b) when b divides a exactly in this ring.
    pub fn exact_div(&self, a: &Coeff, b: &Coeff) -> Option<Coeff> {
        match self {
            CoeffRing::Rationals => (!b.is_zero()).then(|| a / b),
            CoeffRing::PrimeField(_) => self.inv(b).map(|bi| self.mul(a, &bi)),
            CoeffRing::Integers => {
                if b.is_zero() {
                    return a.is_zero().then(BigRational::zero);
                }
                let (q, r) = a.numer().div_rem(b.numer());
                r.is_zero().then(|| BigRational::from(q))
            }
            CoeffRing::IntegersMod(n) => {
                // Solve b*q = a (mod n): solvable iff gcd(b, n) | a.
                let b = b.numer().mod_floor(n);
                let a = a.numer().mod_floor(n);
                let g = b.gcd(n);
                if !a.is_multiple_of(&g) {
                    return None;
                }
                let n1 = n / &g;
                let bi = invert_mod(&(&b / &g).mod_floor(&n1), &n1)?;
                Some(self.normalize(BigRational::from((&a / &g) * bi)))
            }
        }
    }

    pub fn divides(&self, b: &Coeff, a: &Coeff) -> bool {
        self.exact_div(a, b).is_some()
    }

    /// Every element of a finite ring, in residue order.
    pub fn elements(&self) -> Option<Vec<Coeff>> {
        let n = self.modulus()?;
        let mut out = Vec::new();
        let mut k = BigInt::zero();
        while &k < n {
            out.push(BigRational::from(k.clone()));
            k += 1;
        }
        Some(out)
    }

    /// Additive exponent: least e > 0 with e*x = 0 for all x, if finite.
    pub fn additive_exponent(&self) -> Option<BigInt> {
        self.modulus().cloned()
    }

    /// Integer value of an element known to be integral.
    pub fn as_int(&self, a: &Coeff) -> BigInt {
        debug_assert!(a.denom().is_one(), "non-integral coefficient in {self}");
        a.numer().clone()
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Integers => write!(f, "Z"),
            CoeffRing::IntegersMod(n) => write!(f, "Z/{n}"),
            CoeffRing::Rationals => write!(f, "Q"),
            CoeffRing::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

fn invert_mod(a: &BigInt, n: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(n);
    let ext = a.extended_gcd(n);
    ext.gcd.is_one().then(|| ext.x.mod_floor(n))
}

/// Exact rendering of a scalar: integers plain, fractions as `p/q`.
pub fn fmt_coeff(x: &Coeff) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Greatest common divisor of two integer coefficients, nonnegative.
pub fn int_gcd(a: &Coeff, b: &Coeff) -> BigInt {
    a.numer().gcd(b.numer())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_validation() {
        assert!(CoeffRing::integers_mod(1).is_err());
        assert!(CoeffRing::integers_mod(4).is_ok());
        assert!(CoeffRing::prime_field(4).is_err());
        assert!(CoeffRing::prime_field(5).is_ok());
    }

    #[test]
    fn canonical_residues() {
        let z4 = CoeffRing::integers_mod(4).unwrap();
        let x = z4.from_i64(-3);
        assert_eq!(x, z4.from_i64(1));
        assert_eq!(z4.add(&z4.from_i64(3), &z4.from_i64(2)), z4.from_i64(1));
    }

    #[test]
    fn units_and_division() {
        let z = CoeffRing::integers();
        assert!(z.is_unit(&z.from_i64(-1)));
        assert!(!z.is_unit(&z.from_i64(2)));
        assert_eq!(z.exact_div(&z.from_i64(6), &z.from_i64(3)), Some(z.from_i64(2)));
        assert_eq!(z.exact_div(&z.from_i64(1), &z.from_i64(2)), None);

        let z4 = CoeffRing::integers_mod(4).unwrap();
        // 2*q = 2 mod 4 has solutions 1 and 3; any solution is acceptable.
        let q = z4.exact_div(&z4.from_i64(2), &z4.from_i64(2)).unwrap();
        assert_eq!(z4.mul(&q, &z4.from_i64(2)), z4.from_i64(2));
        assert_eq!(z4.exact_div(&z4.from_i64(1), &z4.from_i64(2)), None);
        assert_eq!(z4.inv(&z4.from_i64(3)), Some(z4.from_i64(3)));
        assert_eq!(z4.inv(&z4.from_i64(2)), None);
    }

    #[test]
    fn finite_enumeration() {
        let f3 = CoeffRing::prime_field(3).unwrap();
        assert_eq!(f3.elements().unwrap().len(), 3);
        assert!(CoeffRing::integers().elements().is_none());
    }
}
