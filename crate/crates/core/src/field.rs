//! Exact scalar arithmetic: prime fields F_p and the rationals.
//!
//! All linear algebra in this crate is parameterised over a small field
//! handle rather than over the element type alone, because elements of
//! F_p do not carry their modulus. The handle is cheap to copy and is
//! stored inside matrices and algebra tables.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

/// A field handle. Element values are plain data; every operation goes
/// through the handle.
pub trait Field: Clone + PartialEq + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    /// a + b*c in one call; the hot path of every elimination loop.
    fn mul_add(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.add(a, &self.mul(b, c))
    }
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }
    /// Exact integer exponent (non-negative).
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
}

/// The prime field F_p with a runtime modulus. Elements are canonical
/// representatives in `0..p`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && is_prime(p), "modulus {p} is not prime");
        Fp { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, n: i64) -> u64 {
        self.from_i64(n)
    }
}

impl Field for Fp {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        // p < 2^32 throughout this crate, so the product fits in u64.
        debug_assert!(self.p < (1 << 32));
        (a * b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2) mod p.
        Some(self.pow(a, self.p - 2))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

/// The field of rational numbers, used for characteristic-zero oracles
/// (weighted Dynkin diagrams, lattice exponentials).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
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
}

/// Integrality test used by the lattice exponential: a rational is kept
/// only when its denominator is 1.
pub fn rational_to_bigint(r: &BigRational) -> Option<BigInt> {
    if r.denom().is_one() || (-r.denom()).is_one() {
        Some(r.numer() / r.denom())
    } else {
        None
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Reduce a big integer mod p into `0..p`.
pub fn bigint_mod_p(n: &BigInt, p: u64) -> u64 {
    let m = n % BigInt::from(p);
    let m = if m.is_negative() {
        m + BigInt::from(p)
    } else {
        m
    };
    u64::try_from(m).expect("reduced representative fits u64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fp_basics() {
        let f = Fp::new(7);
        assert_eq!(f.add(&5, &4), 2);
        assert_eq!(f.sub(&2, &5), 4);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.pow(&3, 6), 1);
    }

    #[test]
    #[should_panic]
    fn fp_rejects_composite() {
        let _ = Fp::new(15);
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
    }

    proptest! {
        #[test]
        fn fp_field_axioms(a in 0u64..31, b in 0u64..31, c in 0u64..31) {
            let f = Fp::new(31);
            prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            prop_assert_eq!(f.add(&a, &f.neg(&a)), 0);
            if a != 0 {
                let ai = f.inv(&a).unwrap();
                prop_assert_eq!(f.mul(&a, &ai), 1);
            }
        }
    }
}
