use rand::Rng;

use super::{gcd, DensePoly};
use crate::field::Field;
use crate::{Error, Result};

/// Fields up to this size are searched by plain evaluation.
pub const DEFAULT_EXHAUSTIVE_THRESHOLD: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootSearch {
    /// All roots, ascending; their count equals the degree.
    Roots(Vec<u64>),
    /// Repeated roots or a nonlinear irreducible factor.
    NotSplitting,
}

impl RootSearch {
    pub fn roots(&self) -> Option<&[u64]> {
        match self {
            RootSearch::Roots(r) => Some(r),
            RootSearch::NotSplitting => None,
        }
    }
}

/// `X^e mod v` by repeated squaring.
pub fn x_power_mod<F: Field>(field: &F, e: u64, v: &DensePoly) -> Result<DensePoly> {
    DensePoly::monomial(1).pow_mod(field, e, v)
}

/// Distinct roots of `v` by evaluating at every field element.
pub fn roots_exhaustive<F: Field>(field: &F, v: &DensePoly) -> Vec<u64> {
    (0..field.cardinality())
        .filter(|&a| v.eval(field, a) == 0)
        .collect()
}

/// Decides whether `v` is a product of distinct linear factors over the
/// field, and if so returns the roots.
///
/// Small fields (`|F| <= threshold`) are scanned exhaustively. Larger ones
/// test `X^|F| ≡ X (mod v)` first and then split with Cantor-Zassenhaus.
pub fn roots_with_splitting_check<F: Field, R: Rng + ?Sized>(
    field: &F,
    v: &DensePoly,
    threshold: u64,
    rng: &mut R,
) -> Result<RootSearch> {
    let deg = v.degree().ok_or(Error::DivisionByZero)?;
    if deg == 0 {
        return Ok(RootSearch::Roots(Vec::new()));
    }
    if field.cardinality() <= threshold {
        let roots = roots_exhaustive(field, v);
        return Ok(if roots.len() == deg {
            RootSearch::Roots(roots)
        } else {
            RootSearch::NotSplitting
        });
    }
    let v = v.monic(field);
    let xq = x_power_mod(field, field.cardinality(), &v)?;
    if xq != DensePoly::monomial(1).rem(field, &v)? {
        return Ok(RootSearch::NotSplitting);
    }
    let mut roots: Vec<u64> = equal_degree_split(field, &v, 1, rng)?
        .into_iter()
        .map(|lin| field.neg(lin.coeff(0)))
        .collect();
    roots.sort_unstable();
    Ok(RootSearch::Roots(roots))
}

/// Cantor-Zassenhaus equal-degree factorization. `g` must be monic,
/// squarefree and a product of irreducibles of degree `d`; the factors are
/// returned monic, in no particular order.
pub fn equal_degree_split<F: Field, R: Rng + ?Sized>(
    field: &F,
    g: &DensePoly,
    d: usize,
    rng: &mut R,
) -> Result<Vec<DensePoly>> {
    let n = g.degree().ok_or(Error::DivisionByZero)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == d {
        return Ok(vec![g.monic(field)]);
    }
    if n % d != 0 {
        return Err(Error::InvalidField(format!(
            "degree {n} is not a multiple of {d}"
        )));
    }
    let qc = field.cardinality();
    loop {
        let a = DensePoly::new((0..n).map(|_| field.random(rng)).collect());
        if a.degree().is_none_or(|da| da == 0) {
            continue;
        }
        let b = if qc % 2 == 1 {
            // a^((qc^d - 1)/2) = (a^(1 + qc + ... + qc^(d-1)))^((qc - 1)/2)
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = t.pow_mod(field, qc, g)?;
                acc = acc.mul_mod(field, &t, g)?;
            }
            acc.pow_mod(field, (qc - 1) / 2, g)?
                .sub(field, &DensePoly::one())
        } else {
            // absolute trace to GF(2): Σ a^(2^i), i < log2(qc)·d
            let m = qc.trailing_zeros() as usize * d;
            let mut t = a.rem(field, g)?;
            let mut acc = t.clone();
            for _ in 1..m {
                t = t.mul_mod(field, &t, g)?;
                acc = acc.add(field, &t);
            }
            acc
        };
        let g1 = gcd(field, &b, g);
        let d1 = g1.degree().unwrap_or(0);
        if d1 == 0 || d1 == n {
            continue;
        }
        let g2 = g.divrem(field, &g1)?.0.monic(field);
        let mut out = equal_degree_split(field, &g1, d, rng)?;
        out.extend(equal_degree_split(field, &g2, d, rng)?);
        return Ok(out);
    }
}

/// Splits `v` into monic irreducible factors if `v` divides
/// `X^(|F|^e) - X`, i.e. `v` is squarefree with every irreducible factor of
/// degree dividing `e`. Returns `None` otherwise. Factors are sorted.
pub fn factor_squarefree_orbits<F: Field, R: Rng + ?Sized>(
    field: &F,
    v: &DensePoly,
    e: usize,
    rng: &mut R,
) -> Result<Option<Vec<DensePoly>>> {
    let deg = v.degree().ok_or(Error::DivisionByZero)?;
    if deg == 0 {
        return Ok(Some(Vec::new()));
    }
    let v = v.monic(field);
    let qc = field.cardinality();
    let x = DensePoly::monomial(1).rem(field, &v)?;
    // Frobenius powers X^(qc^i) mod v for i = 1..e
    let mut frob = Vec::with_capacity(e);
    let mut t = x.clone();
    for _ in 0..e {
        t = t.pow_mod(field, qc, &v)?;
        frob.push(t.clone());
    }
    if frob[e - 1] != x {
        return Ok(None);
    }
    let mut rest = v.clone();
    let mut factors = Vec::new();
    for d in 1..=e {
        if rest.degree() == Some(0) {
            break;
        }
        if !e.is_multiple_of(d) {
            continue;
        }
        let h = frob[d - 1].sub(field, &x);
        let g = gcd(field, &h, &rest);
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.divrem(field, &g)?.0;
            factors.extend(equal_degree_split(field, &g, d, rng)?);
        }
    }
    debug_assert_eq!(rest.degree(), Some(0));
    factors.sort();
    Ok(Some(factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ExtField, Fp};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn worked_example_locator_roots() {
        let f = Fp::new(13).unwrap();
        let v = DensePoly::new(vec![3, 0, 2, 5]);
        let got =
            roots_with_splitting_check(&f, &v, DEFAULT_EXHAUSTIVE_THRESHOLD, &mut rng()).unwrap();
        assert_eq!(got, RootSearch::Roots(vec![3, 8, 12]));
        // the Cantor-Zassenhaus path agrees
        let got = roots_with_splitting_check(&f, &v, 0, &mut rng()).unwrap();
        assert_eq!(got, RootSearch::Roots(vec![3, 8, 12]));
    }

    #[test]
    fn x_squared_plus_one() {
        let v = DensePoly::new(vec![1, 0, 1]);
        for threshold in [0, DEFAULT_EXHAUSTIVE_THRESHOLD] {
            let f13 = Fp::new(13).unwrap();
            let r = roots_with_splitting_check(&f13, &v, threshold, &mut rng()).unwrap();
            assert_eq!(r, RootSearch::Roots(vec![5, 8]));
            let f7 = Fp::new(7).unwrap();
            let r = roots_with_splitting_check(&f7, &v, threshold, &mut rng()).unwrap();
            assert_eq!(r, RootSearch::NotSplitting);
        }
    }

    #[test]
    fn x_power_mod_examples() {
        let f = Fp::new(13).unwrap();
        // X - a: constant a^13 = a
        let r = x_power_mod(&f, 13, &DensePoly::linear(&f, 6)).unwrap();
        assert_eq!(r, DensePoly::constant(6));
        // a split cubic: X^13 ≡ X
        let r = x_power_mod(&f, 13, &DensePoly::new(vec![3, 0, 2, 5])).unwrap();
        assert_eq!(r, DensePoly::monomial(1));
        // irreducible quadratic over GF(7): X^7 ≢ X, X^49 ≡ X
        let f7 = Fp::new(7).unwrap();
        let v = DensePoly::new(vec![4, 1, 1]);
        assert_ne!(x_power_mod(&f7, 7, &v).unwrap(), DensePoly::monomial(1));
        assert_eq!(x_power_mod(&f7, 49, &v).unwrap(), DensePoly::monomial(1));
    }

    #[test]
    fn repeated_root_is_not_splitting() {
        let f = Fp::new(13).unwrap();
        let v = DensePoly::linear(&f, 4).mul(&f, &DensePoly::linear(&f, 4));
        for threshold in [0, DEFAULT_EXHAUSTIVE_THRESHOLD] {
            let r = roots_with_splitting_check(&f, &v, threshold, &mut rng()).unwrap();
            assert_eq!(r, RootSearch::NotSplitting);
        }
    }

    /// Every monic polynomial of degree <= 5 over GF(q), q <= 13. Root sets
    /// are invariant under scaling, so monic ones cover all nonzero `v`.
    #[test]
    fn agrees_with_exhaustive_evaluation() {
        let mut r = rng();
        for q in [2u64, 3, 5, 7, 11, 13] {
            let f = Fp::new(q).unwrap();
            for deg in 0..=5u32 {
                let mut coeffs = vec![0u64; deg as usize + 1];
                coeffs[deg as usize] = 1;
                for idx in 0..q.pow(deg) {
                    let mut t = idx;
                    for c in coeffs[..deg as usize].iter_mut() {
                        *c = t % q;
                        t /= q;
                    }
                    let v = DensePoly::new(coeffs.clone());
                    let roots = roots_exhaustive(&f, &v);
                    let expect = if roots.len() == deg as usize {
                        RootSearch::Roots(roots)
                    } else {
                        RootSearch::NotSplitting
                    };
                    assert_eq!(
                        roots_with_splitting_check(&f, &v, 0, &mut r).unwrap(),
                        expect,
                        "{v:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn characteristic_two_splitting() {
        let f = Fp::new(2).unwrap();
        let v = DensePoly::new(vec![0, 1, 1]); // X(X+1)
        let r = roots_with_splitting_check(&f, &v, 0, &mut rng()).unwrap();
        assert_eq!(r, RootSearch::Roots(vec![0, 1]));
        let ext = ExtField::new(2, 4).unwrap();
        let g = DensePoly::monomial(16).sub(&ext, &DensePoly::monomial(1));
        // a random-ish product of 5 distinct linear factors over GF(16)
        let pts = [1u64, 4, 7, 10, 15];
        let v = pts.iter().fold(DensePoly::one(), |acc, &a| {
            acc.mul(&ext, &DensePoly::linear(&ext, a))
        });
        assert!(g.rem(&ext, &v).unwrap().is_zero());
        let r = roots_with_splitting_check(&ext, &v, 0, &mut rng()).unwrap();
        assert_eq!(r, RootSearch::Roots(pts.to_vec()));
    }

    #[test]
    fn orbit_factorization_over_base_field() {
        let f = Fp::new(7).unwrap();
        // (X+3)(X+4)(X+5)(X^2+X+4)
        let v = [vec![3, 1], vec![4, 1], vec![5, 1], vec![4, 1, 1]]
            .into_iter()
            .fold(DensePoly::one(), |acc, c| acc.mul(&f, &DensePoly::new(c)));
        let got = factor_squarefree_orbits(&f, &v, 2, &mut rng())
            .unwrap()
            .unwrap();
        let mut expect = vec![
            DensePoly::new(vec![3, 1]),
            DensePoly::new(vec![4, 1]),
            DensePoly::new(vec![5, 1]),
            DensePoly::new(vec![4, 1, 1]),
        ];
        expect.sort();
        assert_eq!(got, expect);
        // an irreducible cubic has no place in GF(49)
        let cubic = DensePoly::new(vec![2, 0, 0, 1]);
        let with_cubic = v.mul(&f, &cubic);
        assert_eq!(
            factor_squarefree_orbits(&f, &with_cubic, 2, &mut rng()).unwrap(),
            None
        );
        // nor does a square
        let sq = v.mul(&f, &DensePoly::new(vec![3, 1]));
        assert_eq!(
            factor_squarefree_orbits(&f, &sq, 2, &mut rng()).unwrap(),
            None
        );
    }
}
