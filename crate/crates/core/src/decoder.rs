//! Reed-Solomon unique decoding specialised to relation finding.
//!
//! For `f = X^u mod Q` the received word is `y = ev_S(-f/Q - X^k)`. It lies
//! at distance exactly `h` from the code iff `f ≡ Π_{a∈A} (X - a) (mod Q)`
//! for some `A ⊂ S` of size `µ = n - h`, and then the error locator `v` has
//! the roots `S ∖ A`.

use std::collections::HashSet;

use rand::Rng;

use crate::field::{Field, FieldTower, Fp};
use crate::nt;
use crate::poly::{self, partial_eea, DensePoly, DEFAULT_EXHAUSTIVE_THRESHOLD};
use crate::timing::{Phase, TimingReport};
use crate::{Error, Result};

/// Largest support for which dense polynomials of degree `n` are built.
pub const MAX_SUPPORT: u64 = 1 << 24;

/// Evaluation points of the code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Support {
    /// An explicit subset of GF(q), in caller order.
    Points(Vec<u64>),
    /// All of GF(q^e), handled through `G = X^(q^e) - X` only.
    Field { e: usize },
}

/// Roots of a successful locator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ErrorSet {
    /// Distinct roots in GF(q), ascending.
    Points(Vec<u64>),
    /// Monic irreducible factors over GF(q), sorted; each is the minimal
    /// polynomial of one Frobenius orbit of GF(q^e).
    Orbits(Vec<DensePoly>),
}

impl ErrorSet {
    /// Degree of the locator these roots describe.
    pub fn weight(&self) -> usize {
        match self {
            ErrorSet::Points(r) => r.len(),
            ErrorSet::Orbits(f) => f.iter().map(|p| p.degree().unwrap_or(0)).sum(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    /// `v` divides `G`; `v` is kept exactly as the Euclidean iteration
    /// produced it.
    Success {
        v: DensePoly,
        errors: ErrorSet,
    },
    Failure,
}

impl DecodeOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, DecodeOutcome::Success { .. })
    }
}

/// Interpolation polynomial of the received word and its top part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeWorkspace {
    pub i: DensePoly,
    /// `I ÷ X^k`.
    pub s1: DensePoly,
}

/// A Reed-Solomon code over a support `S` with everything the decoder
/// precomputes: `G = Π (X - a)`, `s0 = G ÷ X^k` and `Q̃ = (-Q)^{-1} mod G`.
#[derive(Clone, Debug)]
pub struct CodeSpec {
    fp: Fp,
    q_poly: DensePoly,
    h: usize,
    support: Support,
    n: usize,
    k: usize,
    g: DensePoly,
    s0: DensePoly,
    q_tilde: DensePoly,
    g_mod_q: DensePoly,
    exhaustive_threshold: u64,
}

/// Builds the code for `tower` over `support` (see [`CodeSpec::new`]).
pub fn build_code(tower: &FieldTower, support: Support) -> Result<CodeSpec> {
    CodeSpec::new(tower, support)
}

impl CodeSpec {
    /// Rejects supports containing a root of `Q` and supports with
    /// `n <= 2h`. A point list covering all of GF(q) is normalised to
    /// [`Support::Field`] with `e = 1`.
    pub fn new(tower: &FieldTower, support: Support) -> Result<Self> {
        let fp = *tower.base();
        let q = fp.modulus();
        let h = tower.h();
        let q_poly = tower.modulus().clone();
        let support = match support {
            Support::Points(pts) => {
                let mut seen = HashSet::with_capacity(pts.len());
                for &a in &pts {
                    if a >= q {
                        return Err(Error::InvalidCode(format!("point {a} not in GF({q})")));
                    }
                    if !seen.insert(a) {
                        return Err(Error::DuplicatePoint(a));
                    }
                    if q_poly.eval(&fp, a) == 0 {
                        return Err(Error::InvalidCode(format!(
                            "support contains {a}, a root of Q"
                        )));
                    }
                }
                if pts.len() as u64 == q {
                    Support::Field { e: 1 }
                } else {
                    Support::Points(pts)
                }
            }
            Support::Field { e } => {
                if e == 0 {
                    return Err(Error::InvalidCode("helper degree must be positive".into()));
                }
                Support::Field { e }
            }
        };
        let n = match &support {
            Support::Points(p) => p.len() as u64,
            Support::Field { e } => nt::checked_pow(q, *e as u32)
                .ok_or_else(|| Error::InvalidCode("support size overflows".into()))?,
        };
        if n > MAX_SUPPORT {
            return Err(Error::InvalidCode(format!(
                "support of size {n} exceeds {MAX_SUPPORT}"
            )));
        }
        let n = n as usize;
        if n <= 2 * h {
            return Err(Error::InvalidCode(format!(
                "n = {n} must exceed 2h = {}",
                2 * h
            )));
        }
        let k = n - 2 * h;
        let g = match &support {
            Support::Points(p) => poly::product_tree(&fp, p)?,
            Support::Field { .. } => DensePoly::monomial(n).sub(&fp, &DensePoly::monomial(1)),
        };
        let q_inv = inverse_mod_vanishing(&fp, &q_poly, &g)?.ok_or_else(|| {
            Error::InvalidCode("Q has a root in the support (gcd(Q, G) != 1)".into())
        })?;
        let q_tilde = q_inv.neg(&fp);
        let s0 = g.shr(k);
        let g_mod_q = g.rem(&fp, &q_poly)?;
        Ok(Self {
            fp,
            q_poly,
            h,
            support,
            n,
            k,
            g,
            s0,
            q_tilde,
            g_mod_q,
            exhaustive_threshold: DEFAULT_EXHAUSTIVE_THRESHOLD,
        })
    }

    /// Fields up to this size locate roots by evaluation rather than by
    /// Cantor-Zassenhaus.
    pub fn with_exhaustive_threshold(mut self, threshold: u64) -> Self {
        self.exhaustive_threshold = threshold;
        self
    }

    pub fn base(&self) -> &Fp {
        &self.fp
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    /// Degree of the helper field; 1 for supports inside GF(q).
    pub fn helper_degree(&self) -> usize {
        match self.support {
            Support::Points(_) => 1,
            Support::Field { e } => e,
        }
    }

    /// The support as GF(q) elements, when it lies in GF(q).
    pub fn points(&self) -> Option<Vec<u64>> {
        match &self.support {
            Support::Points(p) => Some(p.clone()),
            Support::Field { e: 1 } => Some((0..self.fp.modulus()).collect()),
            Support::Field { .. } => None,
        }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Relation size `n - h`.
    pub fn mu(&self) -> usize {
        self.n - self.h
    }

    /// Decoding radius, `h`.
    pub fn tau(&self) -> usize {
        self.h
    }

    /// Minimum distance `n - k + 1 = 2h + 1`.
    pub fn d(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn g(&self) -> &DensePoly {
        &self.g
    }

    pub fn s0(&self) -> &DensePoly {
        &self.s0
    }

    pub fn q_tilde(&self) -> &DensePoly {
        &self.q_tilde
    }

    pub fn q_poly(&self) -> &DensePoly {
        &self.q_poly
    }

    /// `G mod Q`, the right-hand side of every relation.
    pub fn g_mod_q(&self) -> &DensePoly {
        &self.g_mod_q
    }

    /// True when `G = X^n - X`, so reduction folds degree `n` onto degree 1.
    pub fn is_frobenius_g(&self) -> bool {
        matches!(self.support, Support::Field { .. })
    }

    /// Reduces `p` modulo `G`.
    pub fn reduce(&self, p: &DensePoly) -> DensePoly {
        if p.len() <= self.n {
            return p.clone();
        }
        if !self.is_frobenius_g() {
            return p.rem(&self.fp, &self.g).expect("G is nonzero");
        }
        let n = self.n;
        let mut c = p.coeffs().to_vec();
        for i in (n..c.len()).rev() {
            let t = std::mem::take(&mut c[i]);
            let j = i - n + 1;
            c[j] = self.fp.add(c[j], t);
        }
        c.truncate(n);
        DensePoly::new(c)
    }

    /// `I = (f·Q̃ mod G) - X^k` and `s1 = I ÷ X^k`.
    pub fn interp_shortcut(&self, f: &DensePoly) -> DecodeWorkspace {
        let i = self
            .reduce(&f.mul(&self.fp, &self.q_tilde))
            .sub(&self.fp, &DensePoly::monomial(self.k));
        let s1 = i.shr(self.k);
        DecodeWorkspace { i, s1 }
    }

    /// Decodes the word attached to `f`.
    ///
    /// `f = 0` is reported as a failure: its word `-X^k` is already close to
    /// the code and yields the constant locator, which carries no relation.
    pub fn decode<R: Rng + ?Sized>(&self, f: &DensePoly, rng: &mut R) -> Result<DecodeOutcome> {
        if f.is_zero() {
            return Ok(DecodeOutcome::Failure);
        }
        let ws = self.interp_shortcut(f);
        self.decode_s1(&ws.s1, rng, &mut TimingReport::default())
    }

    /// Runs the partial Euclidean algorithm on `(s0, s1)` with bound `h`
    /// and tests the locator for divisibility of `G`.
    pub fn decode_s1<R: Rng + ?Sized>(
        &self,
        s1: &DensePoly,
        rng: &mut R,
        timing: &mut TimingReport,
    ) -> Result<DecodeOutcome> {
        let triple = timing.time(Phase::Eea, || partial_eea(&self.fp, &self.s0, s1, self.h))?;
        let v = triple.v;
        debug_assert!(v.degree().is_some_and(|d| d <= self.h));
        let errors = self.locate(&v, rng, timing)?;
        Ok(match errors {
            Some(errors) => DecodeOutcome::Success { v, errors },
            None => DecodeOutcome::Failure,
        })
    }

    /// Roots of `v` if `v | G`.
    fn locate<R: Rng + ?Sized>(
        &self,
        v: &DensePoly,
        rng: &mut R,
        timing: &mut TimingReport,
    ) -> Result<Option<ErrorSet>> {
        let fp = &self.fp;
        if v.degree() == Some(0) {
            return Ok(Some(match self.helper_degree() {
                1 => ErrorSet::Points(Vec::new()),
                _ => ErrorSet::Orbits(Vec::new()),
            }));
        }
        let v = v.monic(fp);
        match &self.support {
            Support::Points(pts) => {
                let divides = timing.time(Phase::XqModV, || self.g.rem(fp, &v))?.is_zero();
                if !divides {
                    return Ok(None);
                }
                let mut roots: Vec<u64> = timing.time(Phase::Roots, || {
                    pts.iter()
                        .copied()
                        .filter(|&a| v.eval(fp, a) == 0)
                        .collect()
                });
                roots.sort_unstable();
                Ok(Some(ErrorSet::Points(roots)))
            }
            Support::Field { e } => {
                let q = fp.modulus();
                let splits = timing.time(Phase::XqModV, || -> Result<bool> {
                    let x = DensePoly::monomial(1).rem(fp, &v)?;
                    let mut t = x.clone();
                    for _ in 0..*e {
                        t = t.pow_mod(fp, q, &v)?;
                    }
                    Ok(t == x)
                })?;
                if !splits {
                    return Ok(None);
                }
                if *e == 1 {
                    let mut roots = timing.time(Phase::Roots, || -> Result<Vec<u64>> {
                        if q <= self.exhaustive_threshold {
                            Ok(poly::roots_exhaustive(fp, &v))
                        } else {
                            Ok(poly::equal_degree_split(fp, &v, 1, rng)?
                                .into_iter()
                                .map(|l| fp.neg(l.coeff(0)))
                                .collect())
                        }
                    })?;
                    roots.sort_unstable();
                    Ok(Some(ErrorSet::Points(roots)))
                } else {
                    let factors = timing
                        .time(Phase::Roots, || {
                            poly::factor_squarefree_orbits(fp, &v, *e, rng)
                        })?
                        .expect("splitting already checked");
                    Ok(Some(ErrorSet::Orbits(factors)))
                }
            }
        }
    }

    /// The received word `ev_S(-f/Q - X^k)`; support must lie in GF(q).
    pub fn word(&self, f: &DensePoly) -> Result<Vec<u64>> {
        let fp = &self.fp;
        let pts = self.gf_q_points()?;
        Ok(pts
            .iter()
            .map(|&a| {
                let qa = self.q_poly.eval(fp, a);
                let t = fp.div(f.eval(fp, a), qa).expect("Q has no root in S");
                fp.sub(fp.neg(t), fp.pow(a, self.k as u64))
            })
            .collect())
    }

    /// `ev_S(r)` for `deg r < k`; a testing oracle.
    pub fn encode(&self, r: &DensePoly) -> Result<Vec<u64>> {
        if let Some(d) = r.degree().filter(|&d| d >= self.k) {
            return Err(Error::DegreeOverflow {
                degree: d,
                bound: self.k,
            });
        }
        let pts = self.gf_q_points()?;
        Ok(pts.iter().map(|&a| r.eval(&self.fp, a)).collect())
    }

    fn gf_q_points(&self) -> Result<Vec<u64>> {
        self.points()
            .ok_or_else(|| Error::InvalidCode("support is not contained in GF(q)".into()))
    }
}

/// Number of coordinates where `y` and `z` differ.
pub fn hamming_distance(y: &[u64], z: &[u64]) -> Result<usize> {
    if y.len() != z.len() {
        return Err(Error::LengthMismatch(y.len(), z.len()));
    }
    Ok(y.iter().zip(z).filter(|(a, b)| a != b).count())
}

/// Inverse of a low-degree `a` modulo a high-degree `g` without running the
/// Euclidean algorithm at degree `n`: with `g = t·a + r` and `s·a + w·r = 1`,
/// `a^{-1} ≡ s - w·t (mod g)`.
fn inverse_mod_vanishing(fp: &Fp, a: &DensePoly, g: &DensePoly) -> Result<Option<DensePoly>> {
    let (t, r) = g.divrem(fp, a)?;
    let (d, s, w) = poly::ext_gcd(fp, a, &r);
    if d != DensePoly::one() {
        return Ok(None);
    }
    Ok(Some(s.sub(fp, &w.mul(fp, &t)).rem(fp, g)?))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::field::FieldTower;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn gf13_3() -> FieldTower {
        FieldTower::new(13, 3, &[11, 2, 0, 1]).unwrap()
    }

    pub(crate) fn code13() -> CodeSpec {
        build_code(&gf13_3(), Support::Points((0..13).collect())).unwrap()
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(3)
    }

    /// All `size`-subsets of `items`, in lexicographic order.
    pub(crate) fn subsets(items: &[u64], size: usize) -> Vec<Vec<u64>> {
        fn go(items: &[u64], size: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if cur.len() == size {
                out.push(cur.clone());
                return;
            }
            for (i, &x) in items.iter().enumerate() {
                if items.len() - i < size - cur.len() {
                    break;
                }
                cur.push(x);
                go(&items[i + 1..], size, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(items, size, &mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn f_a(tower: &FieldTower, a: &[u64]) -> DensePoly {
        let fp = tower.base();
        let prod = a.iter().fold(DensePoly::one(), |acc, &x| {
            acc.mul(fp, &DensePoly::linear(fp, x))
        });
        prod.rem(fp, tower.modulus()).unwrap()
    }

    #[test]
    fn worked_example_parameters() {
        let c = code13();
        assert_eq!((c.n(), c.k(), c.mu(), c.d(), c.tau()), (13, 7, 10, 7, 3));
        assert_eq!(c.support(), &Support::Field { e: 1 });
        assert_eq!(c.s0(), &DensePoly::monomial(6));
        let fp = *c.base();
        let neg_q = c.q_poly().neg(&fp);
        assert_eq!(
            neg_q.mul_mod(&fp, c.q_tilde(), c.g()).unwrap(),
            DensePoly::one()
        );
        // same as the full-degree inverse
        let direct = poly::inverse_mod(&fp, &neg_q, c.g()).unwrap();
        assert_eq!(&direct, c.q_tilde());
    }

    #[test]
    fn worked_example_decode() {
        let c = code13();
        let fp = *c.base();
        let f = DensePoly::new(vec![1, 9, 1]);
        let ws = c.interp_shortcut(&f);
        let y: Vec<u64> = (0..13).map(|a| ws.i.eval(&fp, a)).collect();
        assert_eq!(y, vec![7, 1, 1, 0, 1, 3, 6, 8, 9, 12, 4, 11, 10]);
        assert_eq!(c.word(&f).unwrap(), y);
        let t = partial_eea(&fp, c.s0(), &ws.s1, 3).unwrap();
        assert_eq!(t.u, DensePoly::new(vec![3, 5, 1]));
        assert_eq!(t.v, DensePoly::new(vec![3, 0, 2, 5]));
        assert_eq!(t.g, DensePoly::new(vec![6, 7]));
        match c.decode(&f, &mut rng()).unwrap() {
            DecodeOutcome::Success { v, errors } => {
                assert_eq!(v, DensePoly::new(vec![3, 0, 2, 5]));
                assert_eq!(errors, ErrorSet::Points(vec![3, 8, 12]));
            }
            DecodeOutcome::Failure => panic!("expected success"),
        }
    }

    #[test]
    fn decoded_word_is_at_distance_h() {
        let c = code13();
        let fp = *c.base();
        let y = c.word(&DensePoly::new(vec![1, 9, 1])).unwrap();
        // r interpolates y on k points of A = S \ {3, 8, 12}
        let a: Vec<u64> = (0..13).filter(|x| ![3, 8, 12].contains(x)).collect();
        let pts: Vec<(u64, u64)> = a[..c.k()].iter().map(|&x| (x, y[x as usize])).collect();
        let r = poly::interpolate(&fp, &pts).unwrap();
        assert!(r.degree().unwrap() < c.k());
        assert_eq!(
            hamming_distance(&y, &c.encode(&r).unwrap()).unwrap(),
            c.n() - c.mu()
        );
    }

    #[test]
    fn exhaustive_success_set_matches_subsets() {
        let tower = gf13_3();
        let c = code13();
        let mut expected: Vec<DensePoly> = subsets(&(0..13).collect::<Vec<_>>(), 10)
            .iter()
            .map(|a| f_a(&tower, a))
            .collect();
        expected.sort();
        expected.dedup();
        assert_eq!(expected.len(), 286);
        let mut rng = rng();
        let mut found = Vec::new();
        for idx in 0..13u64.pow(3) {
            let f = tower.ring().from_index(idx).to_poly();
            if let DecodeOutcome::Success { errors, .. } = c.decode(&f, &mut rng).unwrap() {
                assert_eq!(errors.weight(), 3, "f = {}", f.display());
                found.push(f);
            }
        }
        found.sort();
        assert_eq!(found, expected);
    }

    #[test]
    fn rejects_bad_supports() {
        let t = gf13_3();
        assert!(matches!(
            build_code(&t, Support::Points(vec![0, 1, 2, 3, 4, 5])),
            Err(Error::InvalidCode(_))
        ));
        assert_eq!(
            build_code(&t, Support::Points(vec![0, 1, 2, 3, 4, 5, 1])).unwrap_err(),
            Error::DuplicatePoint(1)
        );
        // Q = X + 8 vanishes at 5
        let t1 = FieldTower::new(13, 1, &[8, 1]).unwrap();
        assert!(matches!(
            build_code(&t1, Support::Points(vec![1, 5, 6])),
            Err(Error::InvalidCode(_))
        ));
        assert!(matches!(
            build_code(&t1, Support::Field { e: 1 }),
            Err(Error::InvalidCode(_))
        ));
        let ok = build_code(&t1, Support::Points((0..13).filter(|&a| a != 5).collect())).unwrap();
        assert_eq!((ok.n(), ok.k()), (12, 10));
    }

    #[test]
    fn encode_and_distance() {
        let c = code13();
        assert_eq!(c.encode(&DensePoly::zero()).unwrap(), vec![0; 13]);
        assert_eq!(c.encode(&DensePoly::constant(4)).unwrap(), vec![4; 13]);
        assert!(matches!(
            c.encode(&DensePoly::monomial(7)),
            Err(Error::DegreeOverflow { .. })
        ));
        assert_eq!(hamming_distance(&[1, 2], &[1, 3]).unwrap(), 1);
        assert_eq!(
            hamming_distance(&[1, 2], &[1]),
            Err(Error::LengthMismatch(2, 1))
        );
    }

    #[test]
    fn helper_field_worked_example() {
        let tower = FieldTower::new(7, 5, &[4, 1, 0, 0, 0, 1]).unwrap();
        let c = build_code(&tower, Support::Field { e: 2 }).unwrap();
        assert_eq!((c.n(), c.k(), c.mu()), (49, 39, 44));
        let f = tower.x_pow(20).to_poly();
        match c.decode(&f, &mut rng()).unwrap() {
            DecodeOutcome::Success { errors, .. } => assert_eq!(
                errors,
                ErrorSet::Orbits(vec![
                    DensePoly::new(vec![3, 1]),
                    DensePoly::new(vec![4, 1]),
                    DensePoly::new(vec![4, 1, 1]),
                    DensePoly::new(vec![5, 1]),
                ])
            ),
            DecodeOutcome::Failure => panic!("u = 20 should decode"),
        }
    }

    #[test]
    fn general_support_uses_division() {
        // S = GF(13) minus {0}: G = X^12 - 1
        let t = gf13_3();
        let s: Vec<u64> = (1..13).collect();
        let c = build_code(&t, Support::Points(s.clone())).unwrap();
        assert!(!c.is_frobenius_g());
        let a = &s[..c.mu()];
        let f = f_a(&t, a);
        match c.decode(&f, &mut rng()).unwrap() {
            DecodeOutcome::Success { errors, .. } => {
                assert_eq!(errors, ErrorSet::Points(s[c.mu()..].to_vec()))
            }
            DecodeOutcome::Failure => panic!(),
        }
    }

    proptest! {
        #[test]
        fn shortcut_matches_pointwise_definition_and_lagrange(idx in 0u64..2197) {
            let t = gf13_3();
            let c = code13();
            let fp = *c.base();
            let f = t.ring().from_index(idx).to_poly();
            let ws = c.interp_shortcut(&f);
            let y = c.word(&f).unwrap();
            for a in 0..13u64 {
                prop_assert_eq!(ws.i.eval(&fp, a), y[a as usize]);
            }
            let pts: Vec<(u64, u64)> = (0..13).zip(y).collect();
            prop_assert_eq!(poly::interpolate(&fp, &pts).unwrap(), ws.i.clone());
            prop_assert_eq!(ws.s1, ws.i.shr(c.k()));
        }

        #[test]
        fn random_relation_round_trip(a in proptest::sample::subsequence((0u64..13).collect::<Vec<_>>(), 10)) {
            let t = gf13_3();
            let c = code13();
            let e: Vec<u64> = (0..13).filter(|x| !a.contains(x)).collect();
            let out = c.decode(&f_a(&t, &a), &mut rng()).unwrap();
            match out {
                DecodeOutcome::Success { errors, .. } => prop_assert_eq!(errors, ErrorSet::Points(e)),
                DecodeOutcome::Failure => prop_assert!(false, "decode failed for {:?}", a),
            }
        }
    }
}
