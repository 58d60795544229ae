//! Finite-field arithmetic.
//!
//! Every field element is carried as a `u64`. In the prime field GF(p) this
//! is the residue itself; in an extension GF(p^e) = GF(p)[X]/(D) it is the
//! base-p serialization `Σ c_i p^i` of the reduced representative. Both
//! encodings put zero at 0 and one at 1, which lets [`crate::poly::DensePoly`]
//! trim leading zeros without consulting the field.

mod ext;

pub use ext::{
    find_irreducible, frobenius_orbit, is_irreducible, is_primitive, ExtField, FieldTower,
    QuotientElem, QuotientRing,
};

use std::fmt::Debug;

use rand::Rng;

use crate::nt;
use crate::{Error, Result};

/// A finite field whose elements are encoded as `u64` indices in
/// `[0, cardinality)`.
pub trait Field: Clone + Debug + Send + Sync {
    fn cardinality(&self) -> u64;
    fn characteristic(&self) -> u64;

    fn add(&self, a: u64, b: u64) -> u64;
    fn sub(&self, a: u64, b: u64) -> u64;
    fn neg(&self, a: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;
    fn inv(&self, a: u64) -> Option<u64>;

    /// Image of an integer under `Z -> GF(p) ⊂ F`.
    fn embed(&self, c: u64) -> u64 {
        c % self.characteristic()
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    fn div(&self, a: u64, b: u64) -> Option<u64> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.cardinality())
    }
}

/// The prime field GF(p), `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if !nt::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 32 {
            return Err(Error::InvalidField(format!(
                "characteristic {p} exceeds 32 bits"
            )));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for Fp {
    #[inline]
    fn cardinality(&self) -> u64 {
        self.p
    }

    #[inline]
    fn characteristic(&self) -> u64 {
        self.p
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(nt::pow_mod(a, self.p - 2, self.p))
        }
    }
}
