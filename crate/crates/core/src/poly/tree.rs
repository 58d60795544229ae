use std::collections::HashSet;

use super::DensePoly;
use crate::field::Field;
use crate::{Error, Result};

/// Balanced subproduct tree over distinct points. Level 0 holds the linear
/// factors `X - x_i`; the last level holds the full product.
#[derive(Clone, Debug)]
pub struct ProductTree {
    levels: Vec<Vec<DensePoly>>,
}

impl ProductTree {
    pub fn new<F: Field>(field: &F, points: &[u64]) -> Result<Self> {
        check_distinct(points)?;
        let mut levels = vec![points
            .iter()
            .map(|&x| DensePoly::linear(field, x))
            .collect::<Vec<_>>()];
        while levels.last().is_some_and(|l| l.len() > 1) {
            let prev = levels.last().unwrap();
            let next = prev
                .chunks(2)
                .map(|pair| match pair {
                    [a, b] => a.mul(field, b),
                    [a] => a.clone(),
                    _ => unreachable!(),
                })
                .collect();
            levels.push(next);
        }
        Ok(Self { levels })
    }

    pub fn root(&self) -> DensePoly {
        self.levels
            .last()
            .and_then(|l| l.first().cloned())
            .unwrap_or_else(DensePoly::one)
    }

    /// Folds leaf weights `w_i` into `Σ w_i · Π_{j≠i} (X - x_j)`.
    fn linear_combination<F: Field>(&self, field: &F, weights: &[u64]) -> DensePoly {
        let mut cur: Vec<DensePoly> = weights.iter().map(|&w| DensePoly::constant(w)).collect();
        for level in 0..self.levels.len().saturating_sub(1) {
            let mods = &self.levels[level];
            cur = cur
                .chunks(2)
                .enumerate()
                .map(|(j, pair)| match pair {
                    [a, b] => a
                        .mul(field, &mods[2 * j + 1])
                        .add(field, &b.mul(field, &mods[2 * j])),
                    [a] => a.clone(),
                    _ => unreachable!(),
                })
                .collect();
        }
        cur.pop().unwrap_or_default()
    }
}

fn check_distinct(points: &[u64]) -> Result<()> {
    let mut seen = HashSet::with_capacity(points.len());
    for &x in points {
        if !seen.insert(x) {
            return Err(Error::DuplicatePoint(x));
        }
    }
    Ok(())
}

/// `Π (X - x_i)`. When the points are all of the field the result is
/// `X^|F| - X`, produced without any multiplication.
pub fn product_tree<F: Field>(field: &F, points: &[u64]) -> Result<DensePoly> {
    if points.len() as u64 == field.cardinality() {
        check_distinct(points)?;
        if points.iter().all(|&x| x < field.cardinality()) {
            let n = points.len();
            return Ok(DensePoly::monomial(n).sub(field, &DensePoly::monomial(1)));
        }
    }
    Ok(ProductTree::new(field, points)?.root())
}

/// Lagrange interpolation through `(x_i, y_i)` using the subproduct tree and
/// the derivative of the vanishing polynomial.
pub fn interpolate<F: Field>(field: &F, points: &[(u64, u64)]) -> Result<DensePoly> {
    let xs: Vec<u64> = points.iter().map(|&(x, _)| x).collect();
    let tree = ProductTree::new(field, &xs)?;
    let dg = tree.root().derivative(field);
    let weights: Vec<u64> = points
        .iter()
        .map(|&(x, y)| {
            let d = dg.eval(field, x);
            field
                .div(y, d)
                .expect("distinct points give nonzero derivative")
        })
        .collect();
    Ok(tree.linear_combination(field, &weights))
}
