//! Dense univariate polynomials over a [`Field`].
//!
//! Coefficients are stored least-degree-first; the zero polynomial is the
//! empty vector. Operations take the coefficient field explicitly so the
//! same representation serves GF(q) and its extensions.

mod eea;
mod roots;
mod tree;

pub use eea::{ext_gcd, gcd, inverse_mod, partial_eea, BezoutTriple};
pub use roots::{
    equal_degree_split, factor_squarefree_orbits, roots_exhaustive, roots_with_splitting_check,
    x_power_mod, RootSearch, DEFAULT_EXHAUSTIVE_THRESHOLD,
};
pub use tree::{interpolate, product_tree, ProductTree};

use std::fmt;

use crate::field::Field;
use crate::{Error, Result};

/// Below this length products use the schoolbook method.
const KARATSUBA_CUTOFF: usize = 32;

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DensePoly {
    coeffs: Vec<u64>,
}

impl DensePoly {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Reduces every coefficient into the field before normalizing.
    pub fn from_ints<F: Field>(field: &F, coeffs: &[u64]) -> Self {
        Self::new(coeffs.iter().map(|&c| field.embed(c)).collect())
    }

    /// Builds a polynomial from signed integer coefficients, reduced mod p.
    pub fn from_signed<F: Field>(field: &F, coeffs: &[i64]) -> Self {
        let p = field.characteristic() as i64;
        Self::new(
            coeffs
                .iter()
                .map(|&c| field.embed(c.rem_euclid(p) as u64))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1] }
    }

    pub fn constant(c: u64) -> Self {
        Self::new(vec![c])
    }

    /// `X^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        Self { coeffs }
    }

    /// `X - a`.
    pub fn linear<F: Field>(field: &F, a: u64) -> Self {
        Self::new(vec![field.neg(a), 1])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of coefficients (degree + 1, or 0).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// Quotient by `X^k`: coefficient extraction, no arithmetic.
    pub fn shr(&self, k: usize) -> Self {
        if k >= self.coeffs.len() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Multiplication by `X^k`.
    pub fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Remainder modulo `X^k`.
    pub fn truncate(&self, k: usize) -> Self {
        Self::new(self.coeffs[..k.min(self.coeffs.len())].to_vec())
    }

    pub fn eval<F: Field>(&self, field: &F, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| field.add(field.mul(acc, x), c))
    }

    pub fn add<F: Field>(&self, field: &F, other: &Self) -> Self {
        let (long, short) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = field.add(*c, s);
        }
        Self::new(coeffs)
    }

    pub fn sub<F: Field>(&self, field: &F, other: &Self) -> Self {
        let n = self.len().max(other.len());
        let coeffs = (0..n)
            .map(|i| field.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Self::new(coeffs)
    }

    pub fn neg<F: Field>(&self, field: &F) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| field.neg(c)).collect(),
        }
    }

    pub fn scale<F: Field>(&self, field: &F, s: u64) -> Self {
        if s == 0 {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|&c| field.mul(c, s)).collect(),
        }
    }

    pub fn mul<F: Field>(&self, field: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0; self.len() + other.len() - 1];
        mul_into(field, &self.coeffs, &other.coeffs, &mut out);
        Self::new(out)
    }

    /// Scales so the leading coefficient is one. Zero stays zero.
    pub fn monic<F: Field>(&self, field: &F) -> Self {
        match self.leading() {
            0 | 1 => self.clone(),
            lc => self.scale(field, field.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    pub fn derivative<F: Field>(&self, field: &F) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| field.mul(field.embed(i as u64), c))
                .collect(),
        )
    }

    /// Euclidean division: `self = q·b + r` with `deg r < deg b`.
    pub fn divrem<F: Field>(&self, field: &F, b: &Self) -> Result<(Self, Self)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        if self.len() <= db {
            return Ok((Self::zero(), self.clone()));
        }
        let lc_inv = field.inv(b.leading()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let mut q = vec![0; self.len() - db];
        for i in (db..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            let t = field.mul(c, lc_inv);
            q[i - db] = t;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                let idx = i - db + j;
                r[idx] = field.sub(r[idx], field.mul(t, bj));
            }
        }
        r.truncate(db);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn rem<F: Field>(&self, field: &F, b: &Self) -> Result<Self> {
        Ok(self.divrem(field, b)?.1)
    }

    /// `self · other mod m`.
    pub fn mul_mod<F: Field>(&self, field: &F, other: &Self, m: &Self) -> Result<Self> {
        self.mul(field, other).rem(field, m)
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod<F: Field>(&self, field: &F, mut e: u64, m: &Self) -> Result<Self> {
        let mut base = self.rem(field, m)?;
        let mut acc = Self::one().rem(field, m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(field, &base, m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(field, &base, m)?;
            }
        }
        Ok(acc)
    }

    /// Renders with `X` as the variable, highest degree first.
    pub fn display(&self) -> PolyDisplay<'_> {
        PolyDisplay(self)
    }
}

impl fmt::Debug for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensePoly({})", self.display())
    }
}

pub struct PolyDisplay<'a>(&'a DensePoly);

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.0.coeffs;
        if c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "X")?,
                (1, _) => write!(f, "{a}*X")?,
                (_, 1) => write!(f, "X^{i}")?,
                _ => write!(f, "{a}*X^{i}")?,
            }
        }
        Ok(())
    }
}

/// `out += a·b`; `out` must hold at least `a.len() + b.len() - 1` slots.
fn mul_into<F: Field>(field: &F, a: &[u64], b: &[u64], out: &mut [u64]) {
    if a.len().min(b.len()) < KARATSUBA_CUTOFF {
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(ai, bj));
            }
        }
        return;
    }
    if a.len() != b.len() {
        // Split the longer operand into chunks of the shorter length.
        let (long, short) = if a.len() > b.len() { (a, b) } else { (b, a) };
        for (ci, chunk) in long.chunks(short.len()).enumerate() {
            let off = ci * short.len();
            mul_into(field, chunk, short, &mut out[off..]);
        }
        return;
    }
    // Karatsuba on equal lengths.
    let n = a.len();
    let m = n / 2;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let mut z0 = vec![0; 2 * m - 1];
    mul_into(field, a0, b0, &mut z0);
    let mut z2 = vec![0; a1.len() + b1.len() - 1];
    mul_into(field, a1, b1, &mut z2);
    let sa: Vec<u64> = (0..a1.len())
        .map(|i| field.add(a1[i], a0.get(i).copied().unwrap_or(0)))
        .collect();
    let sb: Vec<u64> = (0..b1.len())
        .map(|i| field.add(b1[i], b0.get(i).copied().unwrap_or(0)))
        .collect();
    let mut z1 = vec![0; sa.len() + sb.len() - 1];
    mul_into(field, &sa, &sb, &mut z1);
    for (i, &v) in z0.iter().enumerate() {
        z1[i] = field.sub(z1[i], v);
        out[i] = field.add(out[i], v);
    }
    for (i, &v) in z2.iter().enumerate() {
        z1[i] = field.sub(z1[i], v);
        out[i + 2 * m] = field.add(out[i + 2 * m], v);
    }
    for (i, &v) in z1.iter().enumerate() {
        out[i + m] = field.add(out[i + m], v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use proptest::prelude::*;

    fn naive_mul(f: &Fp, a: &DensePoly, b: &DensePoly) -> DensePoly {
        let mut out = vec![0; a.len() + b.len()];
        for (i, &x) in a.coeffs().iter().enumerate() {
            for (j, &y) in b.coeffs().iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        DensePoly::new(out)
    }

    #[test]
    fn normalization_and_degree() {
        assert_eq!(DensePoly::new(vec![1, 2, 0, 0]).degree(), Some(1));
        assert!(DensePoly::new(vec![0, 0]).is_zero());
        assert_eq!(DensePoly::zero().degree(), None);
        assert_eq!(DensePoly::monomial(3).coeffs(), &[0, 0, 0, 1]);
    }

    #[test]
    fn splitting_polynomial_divides_frobenius_poly() {
        // 5X^3 + 2X^2 + 3 = 5(X-3)(X-8)(X-12) over GF(13)
        let f = Fp::new(13).unwrap();
        let g = DensePoly::monomial(13).sub(&f, &DensePoly::monomial(1));
        let v = DensePoly::new(vec![3, 0, 2, 5]);
        let (_, r) = g.divrem(&f, &v).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn division_by_one_and_zero() {
        let f = Fp::new(7).unwrap();
        let a = DensePoly::new(vec![1, 2, 3]);
        assert_eq!(
            a.divrem(&f, &DensePoly::one()).unwrap(),
            (a.clone(), DensePoly::zero())
        );
        assert_eq!(a.divrem(&f, &DensePoly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn display_format() {
        assert_eq!(
            DensePoly::new(vec![3, 0, 2, 5]).display().to_string(),
            "5*X^3 + 2*X^2 + 3"
        );
        assert_eq!(DensePoly::new(vec![1, 1]).display().to_string(), "X + 1");
    }

    fn poly_strategy(p: u64, max_len: usize) -> impl Strategy<Value = DensePoly> {
        prop::collection::vec(0..p, 0..max_len).prop_map(DensePoly::new)
    }

    proptest! {
        #[test]
        fn divrem_reconstructs(a in poly_strategy(13, 40), b in poly_strategy(13, 12)) {
            let f = Fp::new(13).unwrap();
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&f, &b).unwrap();
            prop_assert!(r.degree() < b.degree());
            prop_assert_eq!(q.mul(&f, &b).add(&f, &r), a);
        }

        #[test]
        fn karatsuba_matches_schoolbook(a in poly_strategy(101, 150), b in poly_strategy(101, 150)) {
            let f = Fp::new(101).unwrap();
            prop_assert_eq!(a.mul(&f, &b), naive_mul(&f, &a, &b));
        }
    }
}
