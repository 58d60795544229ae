//! Helper-field machinery: decoding over all of GF(q^e) produces locators
//! that are products of minimal polynomials of Frobenius orbits, so the
//! factor base shrinks to one column per orbit.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::decoder::{CodeSpec, DecodeOutcome, ErrorSet, Support};
use crate::field::{frobenius_orbit, ExtField, Field, Fp};
use crate::nt;
use crate::poly::DensePoly;
use crate::{Error, Result};

/// Default cap on `q^e` for enumerating a helper field.
pub const MAX_HELPER_SIZE: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Smallest serialization among the orbit's elements.
    pub rep: u64,
    pub size: usize,
    pub minpoly: DensePoly,
}

/// The Frobenius orbits of GF(q^e) with their minimal polynomials over GF(q).
#[derive(Clone, Debug)]
pub struct OrbitBasis {
    field: ExtField,
    orbits: Vec<Orbit>,
    counts: Vec<u64>,
    by_rep: HashMap<u64, usize>,
    by_minpoly: HashMap<DensePoly, usize>,
}

impl OrbitBasis {
    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn e(&self) -> usize {
        self.field.degree()
    }

    /// Orbits sorted by representative.
    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    /// `n_i` for `i = 1..=e` (index `i - 1`).
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `Σ i·n_i = q^e`.
    pub fn n(&self) -> u64 {
        self.field.cardinality()
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn by_rep(&self, rep: u64) -> Option<&Orbit> {
        self.by_rep.get(&rep).map(|&i| &self.orbits[i])
    }

    pub fn by_minpoly(&self, m: &DensePoly) -> Option<&Orbit> {
        self.by_minpoly.get(m).map(|&i| &self.orbits[i])
    }

    pub fn index_of_rep(&self, rep: u64) -> Option<usize> {
        self.by_rep.get(&rep).copied()
    }
}

/// Enumerates GF(q^e) and groups it into Frobenius orbits, with `q^e`
/// capped at [`MAX_HELPER_SIZE`].
pub fn build_orbit_basis(q: u64, e: usize) -> Result<OrbitBasis> {
    build_orbit_basis_capped(q, e, MAX_HELPER_SIZE)
}

pub fn build_orbit_basis_capped(q: u64, e: usize, cap: u64) -> Result<OrbitBasis> {
    let size = nt::checked_pow(q, e as u32).unwrap_or(u64::MAX);
    if size > cap {
        return Err(Error::HelperTooLarge(size, cap));
    }
    let field = ExtField::new(q, e)?;
    let mut seen = vec![false; size as usize];
    let mut orbits = Vec::new();
    for a in 0..size {
        if seen[a as usize] {
            continue;
        }
        let (elems, minpoly) = frobenius_orbit(&field, a)?;
        for &b in &elems {
            seen[b as usize] = true;
        }
        orbits.push(Orbit {
            rep: a,
            size: elems.len(),
            minpoly,
        });
    }
    let mut counts = vec![0u64; e];
    for o in &orbits {
        counts[o.size - 1] += 1;
    }
    let expected = orbit_counts(q, e);
    if counts != expected {
        return Err(Error::Verification(format!(
            "orbit census {counts:?} disagrees with the Möbius count {expected:?}"
        )));
    }
    let by_rep = orbits.iter().enumerate().map(|(i, o)| (o.rep, i)).collect();
    let by_minpoly: HashMap<DensePoly, usize> = orbits
        .iter()
        .enumerate()
        .map(|(i, o)| (o.minpoly.clone(), i))
        .collect();
    if by_minpoly.len() != orbits.len() {
        return Err(Error::Verification(
            "two orbits share a minimal polynomial".into(),
        ));
    }
    Ok(OrbitBasis {
        field,
        orbits,
        counts,
        by_rep,
        by_minpoly,
    })
}

/// `n_i = (1/i) Σ_{j|i} μ(j) q^(i/j)` for `i | e`, zero otherwise, for
/// `i = 1..=e`.
pub fn orbit_counts(q: u64, e: usize) -> Vec<u64> {
    (1..=e as u64)
        .map(|i| {
            if !(e as u64).is_multiple_of(i) {
                return 0;
            }
            let s: i128 = nt::divisors(i)
                .into_iter()
                .map(|j| nt::mobius(j) as i128 * (q as i128).pow((i / j) as u32))
                .sum();
            (s / i as i128) as u64
        })
        .collect()
}

/// A solution `(h_1, …, h_e)` of `Σ i·h_i = m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RestrictedPartition {
    pub parts: Vec<u64>,
}

impl RestrictedPartition {
    pub fn total(&self) -> u64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &h)| (i as u64 + 1) * h)
            .sum()
    }
}

/// All partitions of `m` into summands `1..=e`, as multiplicity vectors,
/// ordered by decreasing `h_1`, then decreasing `h_2`, and so on.
pub fn enumerate_partitions(m: u64, e: usize) -> Vec<RestrictedPartition> {
    fn go(rest: u64, i: usize, cur: &mut Vec<u64>, out: &mut Vec<RestrictedPartition>) {
        if i == 0 {
            if rest == 0 {
                out.push(RestrictedPartition { parts: cur.clone() });
            }
            return;
        }
        let w = i as u64;
        for c in 0..=rest / w {
            cur[i - 1] = c;
            go(rest - c * w, i - 1, cur, out);
        }
        cur[i - 1] = 0;
    }
    if e == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(m, e, &mut vec![0; e], &mut out);
    out.sort_by(|a, b| b.parts.cmp(&a.parts));
    out
}

/// Exact number `N_e(m)` of Galois-stable subsets of size `m`, i.e. the
/// coefficient of `z^m` in `Π_i (1 + z^i)^(n_i)`.
pub fn count_relations(counts: &[u64], m: u64) -> BigUint {
    let n: u64 = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| (i as u64 + 1) * c)
        .sum();
    if m > n {
        return BigUint::zero();
    }
    // stable sets are closed under complement
    let m = m.min(n - m) as usize;
    let mut series = vec![BigUint::zero(); m + 1];
    series[0] = BigUint::one();
    for (idx, &ni) in counts.iter().enumerate() {
        let i = idx + 1;
        if ni == 0 || i > m {
            continue;
        }
        // (1 + z^i)^ni truncated at z^m: coefficients C(ni, j) at z^(ij)
        let mut factor = Vec::new();
        let mut c = BigUint::one();
        for j in 0..=(m / i) as u64 {
            if j > ni {
                break;
            }
            factor.push(c.clone());
            c = c * BigUint::from(ni - j) / BigUint::from(j + 1);
        }
        let mut next = vec![BigUint::zero(); m + 1];
        for (d, s) in series.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            for (j, f) in factor.iter().enumerate() {
                let t = d + i * j;
                if t > m {
                    break;
                }
                next[t] += s * f;
            }
        }
        series = next;
    }
    series.swap_remove(m)
}

/// `N_e(m) = Σ_partitions Π C(n_i, m_i)`, summed over
/// [`enumerate_partitions`]; the direct form of [`count_relations`].
pub fn count_relations_by_partitions(counts: &[u64], m: u64) -> BigUint {
    enumerate_partitions(m, counts.len())
        .iter()
        .map(|p| {
            p.parts
                .iter()
                .zip(counts)
                .map(|(&mi, &ni)| {
                    if mi > ni {
                        BigUint::zero()
                    } else {
                        binomial(BigUint::from(ni), BigUint::from(mi))
                    }
                })
                .product::<BigUint>()
        })
        .sum()
}

/// The limit `c_e(h)` of `N_e(h)/q^h` as `q` grows: the coefficient of
/// `z^h` in `Π_{i|e} exp(z^i / i)`.
///
/// Only summands dividing `e` appear, because GF(q^e) has no orbits of any
/// other size.
pub fn asymptotic_constant(e: usize, h: usize) -> BigRational {
    let mut series = vec![BigRational::zero(); h + 1];
    series[0] = BigRational::one();
    for i in 1..=e {
        if !e.is_multiple_of(i) || i > h {
            continue;
        }
        // exp(z^i / i) = Σ_j z^(ij) / (i^j j!)
        let mut factor = Vec::new();
        let mut term = BigRational::one();
        for j in 0..=h / i {
            factor.push(term.clone());
            term /= BigRational::from_integer(BigInt::from((i * (j + 1)) as u64));
        }
        let mut next = vec![BigRational::zero(); h + 1];
        for (d, s) in series.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            for (j, f) in factor.iter().enumerate() {
                let t = d + i * j;
                if t > h {
                    break;
                }
                next[t] += s * f;
            }
        }
        series = next;
    }
    series.swap_remove(h)
}

/// `c_e(h)` as the partition sum `Σ Π 1/(i^(h_i) h_i!)` over summands
/// `i | e`; the direct form of [`asymptotic_constant`].
pub fn asymptotic_constant_by_partitions(e: usize, h: usize) -> BigRational {
    enumerate_partitions(h as u64, e)
        .into_iter()
        .filter(|p| {
            p.parts
                .iter()
                .enumerate()
                .all(|(i, &c)| c == 0 || e.is_multiple_of(i + 1))
        })
        .map(|p| {
            let mut den = BigInt::one();
            for (i, &c) in p.parts.iter().enumerate() {
                den *= BigInt::from(i as u64 + 1).pow(c as u32);
                den *= (1..=c).map(BigInt::from).product::<BigInt>();
            }
            BigRational::new(BigInt::one(), den)
        })
        .sum()
}

/// Floating-point value of an exact ratio, accurate for tiny values too.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let (n, d) = (r.numer(), r.denom());
        let shift = d.bits() as i64 - n.bits() as i64;
        let scaled = BigRational::new(n.clone() << shift.max(0) as usize, d.clone());
        scaled.to_f64().unwrap_or(0.0) * 2f64.powi(-(shift.max(0) as i32))
    })
}

/// The factor base: one column per support point, or one per orbit.
#[derive(Clone, Debug)]
pub enum FactorBase {
    /// Support points of GF(q), ascending; descriptor = the point.
    Points { fp: Fp, points: Vec<u64> },
    /// Orbits of GF(q^e); descriptor = orbit representative.
    Orbits(Arc<OrbitBasis>),
}

impl FactorBase {
    /// The base matching a code's support. Builds the orbit basis when the
    /// support is a helper field.
    pub fn for_code(code: &CodeSpec) -> Result<Self> {
        match code.support() {
            Support::Field { e } if *e >= 2 => Ok(FactorBase::Orbits(Arc::new(build_orbit_basis(
                code.base().modulus(),
                *e,
            )?))),
            _ => {
                let mut points = code.points().expect("support lies in GF(q)");
                points.sort_unstable();
                Ok(FactorBase::Points {
                    fp: *code.base(),
                    points,
                })
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            FactorBase::Points { points, .. } => points.len(),
            FactorBase::Orbits(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Helper degree, 1 for a point base.
    pub fn e(&self) -> usize {
        match self {
            FactorBase::Points { .. } => 1,
            FactorBase::Orbits(b) => b.e(),
        }
    }

    /// Descriptors in column order.
    pub fn descriptors(&self) -> Vec<u64> {
        match self {
            FactorBase::Points { points, .. } => points.clone(),
            FactorBase::Orbits(b) => b.orbits().iter().map(|o| o.rep).collect(),
        }
    }

    pub fn column(&self, desc: u64) -> Option<usize> {
        match self {
            FactorBase::Points { points, .. } => points.binary_search(&desc).ok(),
            FactorBase::Orbits(b) => b.index_of_rep(desc),
        }
    }

    /// The polynomial over GF(q) behind a descriptor: `X - a` or the orbit's
    /// minimal polynomial.
    pub fn poly(&self, desc: u64) -> Result<DensePoly> {
        match self {
            FactorBase::Points { fp, points } => {
                points
                    .binary_search(&desc)
                    .map_err(|_| Error::UnknownBasisElement(desc))?;
                Ok(DensePoly::linear(fp, desc))
            }
            FactorBase::Orbits(b) => b
                .by_rep(desc)
                .map(|o| o.minpoly.clone())
                .ok_or(Error::UnknownBasisElement(desc)),
        }
    }

    /// Maps a decoder error set to sorted descriptors.
    pub fn descriptors_of(&self, errors: &ErrorSet) -> Result<Vec<u64>> {
        let mut out = match (self, errors) {
            (FactorBase::Points { points, .. }, ErrorSet::Points(roots)) => {
                for &r in roots {
                    if points.binary_search(&r).is_err() {
                        return Err(Error::UnknownBasisElement(r));
                    }
                }
                roots.clone()
            }
            (FactorBase::Orbits(b), ErrorSet::Orbits(factors)) => factors
                .iter()
                .map(|m| {
                    b.by_minpoly(m).map(|o| o.rep).ok_or_else(|| {
                        Error::OrbitViolation(format!("{} is not an orbit polynomial", m.display()))
                    })
                })
                .collect::<Result<_>>()?,
            _ => {
                return Err(Error::InvalidCode(
                    "error set does not match the factor base".into(),
                ))
            }
        };
        out.sort_unstable();
        Ok(out)
    }
}

/// Decodes `f` over a helper-field support and returns the locator as sorted
/// orbit representatives, or `None` on decoding failure.
pub fn decode_hf<R: Rng + ?Sized>(
    basis: &Arc<OrbitBasis>,
    code: &CodeSpec,
    f: &DensePoly,
    rng: &mut R,
) -> Result<Option<Vec<u64>>> {
    match code.decode(f, rng)? {
        DecodeOutcome::Failure => Ok(None),
        DecodeOutcome::Success { errors, .. } => FactorBase::Orbits(basis.clone())
            .descriptors_of(&errors)
            .map(Some),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::build_code;
    use crate::field::FieldTower;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn orbit_census() {
        let b = build_orbit_basis(7, 2).unwrap();
        assert_eq!(b.counts(), &[7, 21]);
        assert_eq!(b.len(), 28);
        let b1 = build_orbit_basis(5, 1).unwrap();
        assert_eq!(b1.counts(), &[5]);
        let fp = Fp::new(5).unwrap();
        for o in b1.orbits() {
            assert_eq!(o.minpoly, DensePoly::linear(&fp, o.rep));
        }
        assert_eq!(orbit_counts(3, 8)[7], (6561 - 81) / 8);
        assert_eq!(orbit_counts(3, 8)[2], 0);
        assert_eq!(orbit_counts(3, 8)[7], 810);
        assert!(matches!(
            build_orbit_basis_capped(7, 3, 100),
            Err(Error::HelperTooLarge(343, 100))
        ));
    }

    #[test]
    fn orbit_polynomials_multiply_to_frobenius_polynomial() {
        for (q, e) in [(7u64, 2usize), (2, 4), (3, 3), (2, 6)] {
            let b = build_orbit_basis(q, e).unwrap();
            let fp = Fp::new(q).unwrap();
            let prod = b
                .orbits()
                .iter()
                .fold(DensePoly::one(), |acc, o| acc.mul(&fp, &o.minpoly));
            let n = b.n() as usize;
            assert_eq!(
                prod,
                DensePoly::monomial(n).sub(&fp, &DensePoly::monomial(1))
            );
            let weighted: u64 = b
                .counts()
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as u64 + 1) * c)
                .sum();
            assert_eq!(weighted, b.n());
            for o in b.orbits() {
                assert!(crate::field::is_irreducible(&fp, &o.minpoly).unwrap());
                assert_eq!(o.minpoly.degree(), Some(o.size));
                // representative is the smallest element of its orbit
                let (elems, _) = frobenius_orbit(b.field(), o.rep).unwrap();
                assert_eq!(elems.iter().min(), Some(&o.rep));
            }
        }
    }

    #[test]
    fn partitions() {
        let p: Vec<Vec<u64>> = enumerate_partitions(5, 2)
            .into_iter()
            .map(|p| p.parts)
            .collect();
        assert_eq!(p, vec![vec![5, 0], vec![3, 1], vec![1, 2]]);
        assert_eq!(
            enumerate_partitions(7, 1),
            vec![RestrictedPartition { parts: vec![7] }]
        );
        assert_eq!(
            enumerate_partitions(0, 3),
            vec![RestrictedPartition {
                parts: vec![0, 0, 0]
            }]
        );
        for m in 0..20 {
            for part in enumerate_partitions(m, 4) {
                assert_eq!(part.total(), m);
            }
        }
    }

    #[test]
    fn partition_count_growth_tracks_leading_term() {
        // |P_m^e| ~ m^(e-1) / (e! (e-1)!)
        let e = 3usize;
        let lead = |m: f64| m.powi(e as i32 - 1) / 12.0;
        let ratios: Vec<f64> = [50u64, 100, 200, 400]
            .iter()
            .map(|&m| enumerate_partitions(m, e).len() as f64 / lead(m as f64))
            .collect();
        for w in ratios.windows(2) {
            assert!((w[1] - 1.0).abs() < (w[0] - 1.0).abs());
        }
        assert!((ratios[3] - 1.0).abs() < 0.05);
    }

    #[test]
    fn relation_counts() {
        assert_eq!(count_relations(&[7, 21], 5), BigUint::from(2226u32));
        assert_eq!(
            count_relations_by_partitions(&[7, 21], 5),
            BigUint::from(2226u32)
        );
        assert_eq!(count_relations(&[13], 3), BigUint::from(286u32));
        // e = 1 is a binomial; and the complement symmetry
        assert_eq!(count_relations(&[13], 10), BigUint::from(286u32));
        assert_eq!(count_relations(&[3, 3], 3), BigUint::from(10u32));
        assert_eq!(count_relations(&[3, 3], 6), BigUint::from(10u32));
        assert_eq!(count_relations(&[3, 3], 10), BigUint::zero());
        for counts in [
            vec![7u64, 21],
            vec![2, 1, 2],
            vec![3, 3, 0, 18],
            vec![5, 10],
        ] {
            let n: u64 = counts
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as u64 + 1) * c)
                .sum();
            for m in 0..=n.min(12) {
                assert_eq!(
                    count_relations(&counts, m),
                    count_relations_by_partitions(&counts, m),
                    "{counts:?} m={m}"
                );
            }
        }
    }

    #[test]
    fn asymptotic_constants() {
        for h in 1..10 {
            let fact: i64 = (1..=h as i64).product();
            assert_eq!(asymptotic_constant(1, h), ratio(1, fact));
        }
        assert_eq!(asymptotic_constant(2, 5), ratio(13, 60));
        assert_eq!(asymptotic_constant(2, 3), ratio(2, 3));
        assert_eq!(asymptotic_constant(3, 5), ratio(21, 120));
        assert_eq!(asymptotic_constant(4, 5), ratio(56, 120));
        for e in [2, 3, 4, 6, 8, 9, 12] {
            for h in [3, 5, 7, 11, 13] {
                assert_eq!(
                    asymptotic_constant(e, h),
                    asymptotic_constant_by_partitions(e, h)
                );
            }
        }
        let c = rational_to_f64(&asymptotic_constant(2, 67));
        assert!((c / 2.36e-45 - 1.0).abs() < 0.01);
    }

    #[test]
    fn ratio_approaches_constant_as_q_grows() {
        let c = rational_to_f64(&asymptotic_constant(2, 3));
        let mut last = f64::INFINITY;
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let n = count_relations(&orbit_counts(q, 2), 3).to_f64().unwrap();
            let gap = (n / (q as f64).powi(3) - c).abs();
            assert!(gap < last, "q = {q}");
            last = gap;
        }
    }

    #[test]
    fn helper_decode_worked_example() {
        let tower = FieldTower::new(7, 5, &[4, 1, 0, 0, 0, 1]).unwrap();
        let code = build_code(&tower, Support::Field { e: 2 }).unwrap();
        let base = match FactorBase::for_code(&code).unwrap() {
            FactorBase::Orbits(b) => b,
            _ => panic!(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let reps = decode_hf(&base, &code, &tower.x_pow(20).to_poly(), &mut rng)
            .unwrap()
            .unwrap();
        let polys: BTreeSet<DensePoly> = reps
            .iter()
            .map(|&r| base.by_rep(r).unwrap().minpoly.clone())
            .collect();
        let expected: BTreeSet<DensePoly> = [vec![3, 1], vec![4, 1], vec![5, 1], vec![4, 1, 1]]
            .into_iter()
            .map(DensePoly::new)
            .collect();
        assert_eq!(polys, expected);
    }

    /// Roots of `v` inside GF(q^e), by evaluation.
    fn roots_in_helper(field: &ExtField, v: &DensePoly) -> Vec<u64> {
        (0..field.cardinality())
            .filter(|&a| v.eval(field, a) == 0)
            .collect()
    }

    #[test]
    fn helper_locators_are_galois_stable_and_counted() {
        // Q has degree 3, so it has no roots in GF(9)
        let fp = Fp::new(3).unwrap();
        let qpoly = crate::field::find_irreducible(&fp, 3).unwrap();
        let fact = nt::factor_group_order(3, 3).unwrap();
        let tower = FieldTower::new(3, 3, qpoly.coeffs()).unwrap();
        assert!(tower.is_x_primitive(&fact).unwrap());
        let code = build_code(&tower, Support::Field { e: 2 }).unwrap();
        let basis = Arc::new(build_orbit_basis(3, 2).unwrap());
        let field = basis.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut decodable = BTreeSet::new();
        for idx in 1..27u64 {
            let f = tower.ring().from_index(idx).to_poly();
            if let DecodeOutcome::Success { v, errors } = code.decode(&f, &mut rng).unwrap() {
                let roots = roots_in_helper(&field, &v);
                assert_eq!(roots.len(), 3);
                let image: BTreeSet<u64> = roots.iter().map(|&r| field.frobenius(r)).collect();
                assert_eq!(image, roots.iter().copied().collect::<BTreeSet<_>>());
                let reps = FactorBase::Orbits(basis.clone())
                    .descriptors_of(&errors)
                    .unwrap();
                assert!(!reps.is_empty());
                decodable.insert(idx);
            }
        }
        // brute force: Galois-stable A of size µ = 6 with distinct f_A mod Q
        let elems: Vec<u64> = (0..9).collect();
        let mut stable = BTreeSet::new();
        for mask in 0u32..(1 << 9) {
            if mask.count_ones() != 6 {
                continue;
            }
            let a: Vec<u64> = elems
                .iter()
                .copied()
                .filter(|&x| mask >> x & 1 == 1)
                .collect();
            if !a.iter().all(|&x| a.contains(&field.frobenius(x))) {
                continue;
            }
            // Π (X - a) has GF(3) coefficients because A is stable
            let prod = a.iter().fold(DensePoly::one(), |acc, &x| {
                acc.mul(&field, &DensePoly::linear(&field, x))
            });
            assert!(prod.coeffs().iter().all(|&c| c < 3));
            let r = prod.rem(&fp, tower.modulus()).unwrap();
            stable.insert(tower.serialize(&tower.ring().reduce(&r)));
        }
        assert_eq!(stable.len() as u64, 10);
        assert_eq!(count_relations(basis.counts(), 3), BigUint::from(10u32));
        assert_eq!(decodable, stable);
    }

    #[test]
    fn degenerate_helper_matches_plain_decoder() {
        let tower = FieldTower::new(13, 3, &[11, 2, 0, 1]).unwrap();
        let plain = build_code(&tower, Support::Points((0..13).collect())).unwrap();
        let helper = build_code(&tower, Support::Field { e: 1 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for u in 0..200 {
            let f = tower.x_pow(u).to_poly();
            assert_eq!(
                plain.decode(&f, &mut rng).unwrap(),
                helper.decode(&f, &mut rng).unwrap()
            );
        }
    }
}
