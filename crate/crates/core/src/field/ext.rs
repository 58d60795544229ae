use std::fmt;

use rand::Rng;

use super::{Field, Fp};
use crate::nt::{self, GroupOrderFactorization};
use crate::poly::{self, DensePoly};
use crate::{Error, Result};

/// A residue modulo the defining polynomial: exactly `deg` coefficients,
/// least-degree-first, each in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuotientElem {
    coeffs: Vec<u64>,
}

impl QuotientElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn to_poly(&self) -> DensePoly {
        DensePoly::new(self.coeffs.clone())
    }
}

impl fmt::Debug for QuotientElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_poly().display())
    }
}

/// GF(p)[X]/(D) for a monic `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientRing {
    fp: Fp,
    modulus: DensePoly,
}

impl QuotientRing {
    pub fn new(fp: Fp, modulus: DensePoly) -> Result<Self> {
        match modulus.degree() {
            Some(d) if d >= 1 && modulus.is_monic() => Ok(Self { fp, modulus }),
            _ => Err(Error::InvalidField(format!(
                "modulus {} must be monic of positive degree",
                modulus.display()
            ))),
        }
    }

    pub fn base(&self) -> &Fp {
        &self.fp
    }

    pub fn modulus(&self) -> &DensePoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn zero(&self) -> QuotientElem {
        QuotientElem {
            coeffs: vec![0; self.degree()],
        }
    }

    pub fn one(&self) -> QuotientElem {
        self.reduce(&DensePoly::one())
    }

    /// Class of `X`.
    pub fn x(&self) -> QuotientElem {
        self.reduce(&DensePoly::monomial(1))
    }

    pub fn reduce(&self, p: &DensePoly) -> QuotientElem {
        let r = p.rem(&self.fp, &self.modulus).expect("modulus is nonzero");
        let mut coeffs = r.into_coeffs();
        coeffs.resize(self.degree(), 0);
        QuotientElem { coeffs }
    }

    /// Builds an element from raw coefficients (reduced mod p and mod D).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> QuotientElem {
        self.reduce(&DensePoly::from_ints(&self.fp, coeffs))
    }

    pub fn add(&self, a: &QuotientElem, b: &QuotientElem) -> QuotientElem {
        QuotientElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.fp.add(x, y))
                .collect(),
        }
    }

    pub fn sub(&self, a: &QuotientElem, b: &QuotientElem) -> QuotientElem {
        QuotientElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.fp.sub(x, y))
                .collect(),
        }
    }

    pub fn mul(&self, a: &QuotientElem, b: &QuotientElem) -> QuotientElem {
        let d = self.degree();
        let f = &self.fp;
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        let m = self.modulus.coeffs();
        for i in (d..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..d {
                prod[i - d + j] = f.sub(prod[i - d + j], f.mul(c, m[j]));
            }
        }
        prod.truncate(d);
        QuotientElem { coeffs: prod }
    }

    /// `a ← X·a mod D` in place; returns the coefficient of degree `d-1`
    /// that was shifted out.
    pub fn mul_x_in_place(&self, a: &mut QuotientElem) -> u64 {
        let f = &self.fp;
        let m = self.modulus.coeffs();
        let top = a.coeffs.pop().expect("degree >= 1");
        a.coeffs.insert(0, 0);
        if top != 0 {
            for (c, &mj) in a.coeffs.iter_mut().zip(m) {
                *c = f.sub(*c, f.mul(top, mj));
            }
        }
        top
    }

    pub fn scale(&self, a: &QuotientElem, s: u64) -> QuotientElem {
        QuotientElem {
            coeffs: a.coeffs.iter().map(|&c| self.fp.mul(c, s)).collect(),
        }
    }

    /// `f^u`; `u = 0` gives one, including for `f = 0`.
    pub fn pow(&self, f: &QuotientElem, mut u: u64) -> QuotientElem {
        let mut acc = self.one();
        let mut base = f.clone();
        while u > 0 {
            if u & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            u >>= 1;
            if u > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn inv(&self, a: &QuotientElem) -> Option<QuotientElem> {
        poly::inverse_mod(&self.fp, &a.to_poly(), &self.modulus).map(|p| self.reduce(&p))
    }

    /// Base-p serialization `Σ c_i p^i`.
    pub fn to_index(&self, a: &QuotientElem) -> u64 {
        let p = self.fp.modulus();
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub fn from_index(&self, mut idx: u64) -> QuotientElem {
        let p = self.fp.modulus();
        let coeffs = (0..self.degree())
            .map(|_| {
                let c = idx % p;
                idx /= p;
                c
            })
            .collect();
        QuotientElem { coeffs }
    }
}

/// GF(p^e) as a [`Field`] over serialized indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    ring: QuotientRing,
    cardinality: u64,
}

impl ExtField {
    /// Uses the smallest monic irreducible of degree `e` in serialization
    /// order as modulus, so the encoding is reproducible from `(p, e)`.
    pub fn new(p: u64, e: usize) -> Result<Self> {
        let fp = Fp::new(p)?;
        let modulus = find_irreducible(&fp, e)?;
        Self::with_modulus(fp, modulus)
    }

    pub fn with_modulus(fp: Fp, modulus: DensePoly) -> Result<Self> {
        let e = modulus.degree().unwrap_or(0);
        let cardinality = nt::checked_pow(fp.modulus(), e as u32)
            .filter(|&c| c < 1 << 62)
            .ok_or_else(|| Error::InvalidField("extension too large".into()))?;
        if !is_irreducible(&fp, &modulus)? {
            return Err(Error::Reducible(modulus.display().to_string()));
        }
        Ok(Self {
            ring: QuotientRing::new(fp, modulus)?,
            cardinality,
        })
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.ring.degree()
    }

    pub fn frobenius(&self, a: u64) -> u64 {
        self.pow(a, self.characteristic())
    }
}

impl Field for ExtField {
    fn cardinality(&self) -> u64 {
        self.cardinality
    }

    fn characteristic(&self) -> u64 {
        self.ring.fp.modulus()
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let p = self.characteristic();
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u64, 1u64);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    fn neg(&self, a: u64) -> u64 {
        let p = self.characteristic();
        let (mut a, mut out, mut place) = (a, 0u64, 1u64);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let r = &self.ring;
        r.to_index(&r.mul(&r.from_index(a), &r.from_index(b)))
    }

    fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let r = &self.ring;
        r.inv(&r.from_index(a)).map(|x| r.to_index(&x))
    }
}

/// Rabin's irreducibility test over GF(p).
pub fn is_irreducible(fp: &Fp, d: &DensePoly) -> Result<bool> {
    let n = match d.degree() {
        None | Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(n) => n,
    };
    let d = d.monic(fp);
    let p = fp.modulus();
    let x = DensePoly::monomial(1);
    // X^(p^i) mod d for i = 1..=n
    let mut frob = Vec::with_capacity(n);
    let mut t = x.clone();
    for _ in 0..n {
        t = t.pow_mod(fp, p, &d)?;
        frob.push(t.clone());
    }
    if frob[n - 1] != x {
        return Ok(false);
    }
    for (r, _) in nt::factor(n as u64, nt::DEFAULT_RHO_BUDGET)? {
        let m = n / r as usize;
        let g = poly::gcd(fp, &frob[m - 1].sub(fp, &x), &d);
        if g != DensePoly::one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest monic irreducible polynomial of degree `e` over GF(p), ordering
/// candidates by the serialization of their lower coefficients.
pub fn find_irreducible(fp: &Fp, e: usize) -> Result<DensePoly> {
    if e == 0 {
        return Err(Error::InvalidField("degree 0".into()));
    }
    let p = fp.modulus();
    let span = nt::checked_pow(p, e as u32)
        .ok_or_else(|| Error::InvalidField("search space overflows".into()))?;
    for idx in 0..span {
        let mut c = Vec::with_capacity(e + 1);
        let mut t = idx;
        for _ in 0..e {
            c.push(t % p);
            t /= p;
        }
        c.push(1);
        let cand = DensePoly::new(c);
        if is_irreducible(fp, &cand)? {
            return Ok(cand);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// True iff `g` generates the multiplicative group: `g^(N/ℓ) ≠ 1` for every
/// prime `ℓ | N`.
pub fn is_primitive(
    g: &QuotientElem,
    fact: &GroupOrderFactorization,
    ring: &QuotientRing,
) -> Result<bool> {
    Ok(primitivity_witness(g, fact, ring)?.is_none())
}

/// The first prime `ℓ` with `g^(N/ℓ) = 1`, if any.
pub(crate) fn primitivity_witness(
    g: &QuotientElem,
    fact: &GroupOrderFactorization,
    ring: &QuotientRing,
) -> Result<Option<u64>> {
    if g.is_zero() {
        return Err(Error::ZeroElement);
    }
    let one = ring.one();
    for &(l, _) in &fact.factors {
        if ring.pow(g, fact.order / l) == one {
            return Ok(Some(l));
        }
    }
    if fact.factors.is_empty() && *g != one {
        return Ok(Some(1));
    }
    Ok(None)
}

/// Frobenius orbit `{a, a^p, a^(p^2), ...}` of `a ∈ GF(p^e)` together with
/// its minimal polynomial over GF(p).
pub fn frobenius_orbit(field: &ExtField, a: u64) -> Result<(Vec<u64>, DensePoly)> {
    let mut orbit = vec![a];
    let mut b = field.frobenius(a);
    while b != a {
        orbit.push(b);
        b = field.frobenius(b);
    }
    let minpoly = orbit.iter().fold(DensePoly::one(), |acc, &b| {
        acc.mul(field, &DensePoly::linear(field, b))
    });
    let p = field.characteristic();
    if minpoly.coeffs().iter().any(|&c| c >= p) {
        return Err(Error::Verification(format!(
            "minimal polynomial of {a} has coefficients outside the prime field"
        )));
    }
    Ok((orbit, minpoly))
}

/// The target field GF(q^h) = GF(q)[X]/(Q) with generator `ω = X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTower {
    q: u64,
    h: usize,
    ring: QuotientRing,
}

impl FieldTower {
    /// Validates primality of `q` and that `Q` is monic, of degree `h` and
    /// irreducible. Primitivity of `X` is checked separately.
    pub fn new(q: u64, h: usize, modulus: &[u64]) -> Result<Self> {
        let fp = Fp::new(q)?;
        if h == 0 {
            return Err(Error::InvalidField(
                "extension degree must be positive".into(),
            ));
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= q) {
            return Err(Error::InvalidField(format!(
                "coefficient {c} not reduced mod {q}"
            )));
        }
        let m = DensePoly::new(modulus.to_vec());
        if m.degree() != Some(h) || !m.is_monic() {
            return Err(Error::InvalidField(format!(
                "Q = {} must be monic of degree {h}",
                m.display()
            )));
        }
        nt::checked_pow(q, h as u32)
            .filter(|&c| c < 1 << 62)
            .ok_or_else(|| Error::InvalidField(format!("{q}^{h} exceeds 62 bits")))?;
        if !is_irreducible(&fp, &m)? {
            return Err(Error::Reducible(m.display().to_string()));
        }
        Ok(Self {
            q,
            h,
            ring: QuotientRing::new(fp, m)?,
        })
    }

    /// Samples monic polynomials of degree `h` until one is irreducible and
    /// has `X` primitive.
    pub fn random_primitive<R: Rng + ?Sized>(
        q: u64,
        h: usize,
        fact: &GroupOrderFactorization,
        rng: &mut R,
    ) -> Result<Self> {
        let fp = Fp::new(q)?;
        loop {
            let mut c: Vec<u64> = (0..h).map(|_| rng.gen_range(0..q)).collect();
            c.push(1);
            if c[0] == 0 && h > 1 {
                continue;
            }
            let m = DensePoly::new(c);
            if !is_irreducible(&fp, &m)? {
                continue;
            }
            let tower = Self {
                q,
                h,
                ring: QuotientRing::new(fp, m)?,
            };
            if tower.is_x_primitive(fact)? {
                return Ok(tower);
            }
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn base(&self) -> &Fp {
        self.ring.base()
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn modulus(&self) -> &DensePoly {
        self.ring.modulus()
    }

    /// `q^h`.
    pub fn cardinality(&self) -> u64 {
        self.q.pow(self.h as u32)
    }

    /// `q^h - 1`.
    pub fn group_order(&self) -> u64 {
        self.cardinality() - 1
    }

    pub fn omega(&self) -> QuotientElem {
        self.ring.x()
    }

    pub fn is_x_primitive(&self, fact: &GroupOrderFactorization) -> Result<bool> {
        is_primitive(&self.omega(), fact, &self.ring)
    }

    /// The first prime `ℓ` with `X^(N/ℓ) = 1`, if `X` is not primitive.
    pub fn x_primitivity_witness(&self, fact: &GroupOrderFactorization) -> Result<Option<u64>> {
        primitivity_witness(&self.omega(), fact, &self.ring)
    }

    /// `X^u mod Q`.
    pub fn x_pow(&self, u: u64) -> QuotientElem {
        self.ring.pow(&self.omega(), u)
    }

    pub fn serialize(&self, a: &QuotientElem) -> u64 {
        self.ring.to_index(a)
    }

    pub fn deserialize(&self, idx: u64) -> Result<QuotientElem> {
        if idx >= self.cardinality() {
            return Err(Error::Parse(format!("element {idx} out of range")));
        }
        Ok(self.ring.from_index(idx))
    }
}
