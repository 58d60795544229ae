//! Discrete logarithms in GF(q^h) by Reed-Solomon unique decoding.
//!
//! Index calculus normally needs to factor many polynomials over GF(q) and
//! keep the smooth ones. Here that step is replaced by a decoding problem:
//! `X^u mod Q` is a product of `µ` distinct linear factors `X - a`, `a ∈ S`,
//! exactly when a received word derived from it lies within distance `h`
//! of a Reed-Solomon codeword over the support `S`. The error locator of
//! that word yields the relation `X^u · v(X) ≡ G(X) (mod Q)`.

pub mod collector;
pub mod decoder;
pub mod error;
pub mod field;
pub mod galois;
pub mod instance;
pub mod io;
pub mod nt;
pub mod poly;
pub mod solver;
pub mod timing;

pub use error::{Error, Result};
