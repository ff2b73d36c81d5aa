//! Seeded generators for test data.
//!
//! Every trial loop derives its generator from `(seed, trial)` via
//! [`trial_rng`], so results do not depend on iteration order.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{rat, Rational};
use crate::tensor::{project_to_weyl, CurvatureTensor, EinsteinData, SymMatrix, Tensor};

/// Generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Box–Muller standard normal.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
}

/// Uniform point on the simplex `{x ≥ 0, Σx = total}` (flat Dirichlet).
pub fn dirichlet<R: Rng + ?Sized>(rng: &mut R, len: usize, total: f64) -> Vec<f64> {
    let e: Vec<f64> = (0..len).map(|_| -libm::log(1.0 - rng.random::<f64>())).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| total * v / s).collect()
}

/// Components uniform in `[-1, 1]`.
pub fn random_tensor<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> Tensor<f64> {
    Tensor::from_fn(n, rank, |_| uniform(rng, -1.0, 1.0))
}

/// Components `p / denom` with `p` uniform in `-denom..=denom`.
pub fn random_rational_tensor<R: Rng + ?Sized>(rng: &mut R, n: usize, denom: i64) -> Tensor<Rational> {
    Tensor::from_fn(n, 4, |_| rat(rng.random_range(-denom..=denom), denom))
}

/// Random Weyl tensor: a random array pushed through [`project_to_weyl`].
pub fn random_weyl<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CurvatureTensor<f64> {
    project_to_weyl(&random_tensor(rng, n, 4)).expect("rank 4")
}

/// Einstein data with a random Weyl part of norm `weyl_norm` and scalar
/// curvature `s`.
pub fn random_einstein<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    weyl_norm: f64,
    s: f64,
) -> EinsteinData<f64> {
    let w = random_weyl(rng, n);
    let norm = libm::sqrt(w.norm_sq());
    let w = if norm > 0.0 { w.scale(&(weyl_norm / norm)) } else { w };
    EinsteinData::new(s, w).expect("projected tensor is trace-free")
}

pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SymMatrix<f64> {
    SymMatrix::from_upper(n, |_, _| uniform(rng, -1.0, 1.0))
}

/// Random orthogonal matrix (rows orthonormal), by Gram–Schmidt on a Gaussian
/// matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    while rows.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| standard_normal(rng)).collect();
        for _ in 0..2 {
            for r in &rows {
                let d: f64 = r.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(r).for_each(|(x, y)| *x -= d * y);
            }
        }
        let norm = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            rows.push(v);
        }
    }
    rows
}

/// Sorted vector of `len` uniform values in `[lo, hi]`.
pub fn sorted_uniform<R: Rng + ?Sized>(rng: &mut R, len: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..len).map(|_| uniform(rng, lo, hi)).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Random rational in `[-bound, bound]` with denominator `denom`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64, denom: i64) -> Rational {
    rat(rng.random_range(-bound * denom..=bound * denom), denom)
}
