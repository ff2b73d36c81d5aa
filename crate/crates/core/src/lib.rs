//! Algebra of the curvature operator of the second kind on algebraic Einstein
//! curvature tensors.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! - [`tensor`]: curvature tensors on Euclidean `n`-space, orthonormal bases of
//!   traceless symmetric 2-tensors, the first- and second-kind curvature
//!   operators, and the derivation action of symmetric 2-tensors on tensors.
//! - [`spectra`]: a cyclic Jacobi eigensolver, sorted spectra, cone conditions
//!   and the two spectral inequalities built on them.
//! - [`bochner`]: the cubic Bochner functionals in the eigenvalues and the exact
//!   rational solution of the coefficient-matching equation for `θ(n, k)`.
//! - [`optimize`]: minimization of `Σλ³ − Σλ²` on a scaled simplex, both
//!   analytically and with a projected-gradient oracle.
//! - [`theorems`]: admissibility of `(n, k)`, the constant table and a
//!   hypothesis checker for concrete spectra.
//!
//! Every exact computation runs over [`Rational`]; eigenvalues and sampling use
//! `f64`. Both implement [`Scalar`], and generic code never mixes the two.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bochner;
pub mod error;
pub mod optimize;
pub mod random;
pub mod scalar;
pub mod spectra;
pub mod tensor;
pub mod theorems;

pub use error::{Error, Identity, Result};
pub use scalar::{Rational, Scalar};
