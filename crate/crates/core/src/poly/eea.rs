use super::DensePoly;
use crate::field::Field;
use crate::{Error, Result};

/// Output of the partial extended Euclidean algorithm:
/// `s0·u + s1·v = g` for the inputs that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutTriple {
    pub u: DensePoly,
    pub v: DensePoly,
    pub g: DensePoly,
}

impl BezoutTriple {
    /// Recomputes `s0·u + s1·v` and compares it with `g`.
    pub fn holds<F: Field>(&self, field: &F, s0: &DensePoly, s1: &DensePoly) -> bool {
        s0.mul(field, &self.u).add(field, &s1.mul(field, &self.v)) == self.g
    }
}

#[inline]
fn below(p: &DensePoly, bound: usize) -> bool {
    p.degree().is_none_or(|d| d < bound)
}

/// Runs the Euclidean algorithm on `(s0, s1)` and stops at the first
/// remainder of degree `< bound`.
///
/// `v` is returned exactly as the iteration produces it, not normalized.
/// If `deg s1 < bound` already, the result is `(0, 1, s1)`.
pub fn partial_eea<F: Field>(
    field: &F,
    s0: &DensePoly,
    s1: &DensePoly,
    bound: usize,
) -> Result<BezoutTriple> {
    if below(s1, bound) {
        return Ok(BezoutTriple {
            u: DensePoly::zero(),
            v: DensePoly::one(),
            g: s1.clone(),
        });
    }
    if s1.degree() >= s0.degree() {
        return Err(Error::DegreeOverflow {
            degree: s1.degree().unwrap_or(0),
            bound: s0.degree().unwrap_or(0),
        });
    }
    let (mut r0, mut r1) = (s0.clone(), s1.clone());
    let (mut u0, mut u1) = (DensePoly::one(), DensePoly::zero());
    let (mut v0, mut v1) = (DensePoly::zero(), DensePoly::one());
    loop {
        let (q, r2) = r0.divrem(field, &r1)?;
        let u2 = u0.sub(field, &q.mul(field, &u1));
        let v2 = v0.sub(field, &q.mul(field, &v1));
        if below(&r2, bound) {
            return Ok(BezoutTriple {
                u: u2,
                v: v2,
                g: r2,
            });
        }
        (r0, r1) = (r1, r2);
        (u0, u1) = (u1, u2);
        (v0, v1) = (v1, v2);
    }
}

/// Full extended Euclid: returns `(g, s, t)` with `a·s + b·t = g`, `g` monic
/// (or zero when both inputs are zero).
pub fn ext_gcd<F: Field>(
    field: &F,
    a: &DensePoly,
    b: &DensePoly,
) -> (DensePoly, DensePoly, DensePoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (DensePoly::one(), DensePoly::zero());
    let (mut t0, mut t1) = (DensePoly::zero(), DensePoly::one());
    while !r1.is_zero() {
        let (q, r2) = r0.divrem(field, &r1).expect("r1 nonzero");
        let s2 = s0.sub(field, &q.mul(field, &s1));
        let t2 = t0.sub(field, &q.mul(field, &t1));
        (r0, r1) = (r1, r2);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    match r0.leading() {
        0 | 1 => (r0, s0, t0),
        lc => {
            let li = field.inv(lc).expect("nonzero");
            (
                r0.scale(field, li),
                s0.scale(field, li),
                t0.scale(field, li),
            )
        }
    }
}

/// Monic gcd.
pub fn gcd<F: Field>(field: &F, a: &DensePoly, b: &DensePoly) -> DensePoly {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    while !r1.is_zero() {
        let r2 = r0.rem(field, &r1).expect("r1 nonzero");
        r0 = r1;
        r1 = r2;
    }
    r0.monic(field)
}

/// Inverse of `a` modulo `m`, `None` when they share a factor.
pub fn inverse_mod<F: Field>(field: &F, a: &DensePoly, m: &DensePoly) -> Option<DensePoly> {
    let a = a.rem(field, m).ok()?;
    let (g, s, _) = ext_gcd(field, &a, m);
    if g != DensePoly::one() {
        return None;
    }
    s.rem(field, m).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use proptest::prelude::*;

    #[test]
    fn early_exit_when_s1_already_small() {
        let f = Fp::new(13).unwrap();
        let s0 = DensePoly::monomial(6);
        let s1 = DensePoly::new(vec![4, 1]);
        let t = partial_eea(&f, &s0, &s1, 3).unwrap();
        assert_eq!(
            t,
            BezoutTriple {
                u: DensePoly::zero(),
                v: DensePoly::one(),
                g: s1
            }
        );
    }

    #[test]
    fn inverse_modulo_frobenius_polynomial() {
        let f = Fp::new(13).unwrap();
        let g = DensePoly::monomial(13).sub(&f, &DensePoly::monomial(1));
        let q = DensePoly::new(vec![11, 2, 0, 1]);
        let inv = inverse_mod(&f, &q, &g).unwrap();
        assert_eq!(inv.mul_mod(&f, &q, &g).unwrap(), DensePoly::one());
        assert!(inverse_mod(&f, &DensePoly::new(vec![0, 1]), &g).is_none());
    }

    fn poly_strategy(max_len: usize) -> impl Strategy<Value = DensePoly> {
        prop::collection::vec(0u64..13, 1..max_len).prop_map(DensePoly::new)
    }

    proptest! {
        #[test]
        fn bezout_identity_and_decreasing_remainders(
            s0 in poly_strategy(16), s1 in poly_strategy(16), bound in 0usize..8
        ) {
            let f = Fp::new(13).unwrap();
            prop_assume!(s1.degree() < s0.degree());
            let t = partial_eea(&f, &s0, &s1, bound).unwrap();
            prop_assert!(t.holds(&f, &s0, &s1));
            prop_assert!(below(&t.g, bound));
            prop_assert!(!t.v.is_zero());
        }

        #[test]
        fn bound_one_yields_gcd_up_to_scalar(s0 in poly_strategy(12), s1 in poly_strategy(12)) {
            let f = Fp::new(13).unwrap();
            prop_assume!(s1.degree() < s0.degree() && !s1.is_zero());
            let full = gcd(&f, &s0, &s1);
            let t = partial_eea(&f, &s0, &s1, 1).unwrap();
            if full == DensePoly::one() {
                prop_assert_eq!(t.g.degree(), Some(0));
            } else {
                prop_assert!(t.g.is_zero());
            }
        }

        #[test]
        fn ext_gcd_identity(a in poly_strategy(14), b in poly_strategy(14)) {
            let f = Fp::new(13).unwrap();
            let (g, s, t) = ext_gcd(&f, &a, &b);
            prop_assert_eq!(a.mul(&f, &s).add(&f, &b.mul(&f, &t)), g.clone());
            if !g.is_zero() {
                prop_assert!(a.rem(&f, &g).unwrap().is_zero());
                prop_assert!(b.rem(&f, &g).unwrap().is_zero());
            }
        }
    }
}
