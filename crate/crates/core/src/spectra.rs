//! Symmetric eigenproblem, sorted spectra and cone conditions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Identity, Result};
use crate::scalar::{self, Scalar};
use crate::tensor::{build_traceless_basis, second_kind_matrix, CurvatureTensor, SymMatrix};

/// Jacobi stops once the off-diagonal Frobenius norm is below this fraction
/// of `‖A‖`.
pub const JACOBI_TOL: f64 = 1e-13;
/// Inputs with `max |A_ij − A_ji| > ASYMMETRY_TOL·‖A‖` are rejected.
pub const ASYMMETRY_TOL: f64 = 1e-12;
/// Float cone slacks are compared to `−CONE_SLACK_TOL·|λ̄|`.
pub const CONE_SLACK_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in nondecreasing order together with their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    values: Vec<T>,
    mean: T,
}

impl<T: Scalar> Spectrum<T> {
    /// Sorts `values` (stable) and computes the mean.
    pub fn new(mut values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Precondition("empty spectrum".into()));
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        let mean = scalar::mean(&values);
        Ok(Spectrum { values, mean })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `λ̄ = Σλ_i / N`.
    pub fn mean(&self) -> &T {
        &self.mean
    }

    pub fn scale(&self, c: &T) -> Self {
        Spectrum::new(self.values.iter().map(|v| v.clone() * c.clone()).collect())
            .expect("nonempty")
    }

    pub fn to_f64(&self) -> Spectrum<f64> {
        Spectrum { values: self.values.iter().map(Scalar::to_f64).collect(), mean: self.mean.to_f64() }
    }

    /// `Σ_{i<k} λ_i`.
    pub fn partial_sum(&self, k: usize) -> T {
        scalar::sum(self.values[..k].iter().cloned())
    }
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub spectrum: Spectrum<f64>,
    /// `vectors[i]` is a unit eigenvector for `spectrum.values()[i]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi. Eigenvalues ascending, eigenvectors permuted to match;
/// eigenvector signs are arbitrary.
pub fn eigen_sym(a: &SymMatrix<f64>) -> Result<Eigen> {
    let n = a.n();
    if n == 0 {
        return Err(Error::Precondition("empty matrix".into()));
    }
    let norm = a.frobenius_norm();
    if a.max_asymmetry() > ASYMMETRY_TOL * norm {
        return Err(Error::IdentityViolated { identity: Identity::MatrixSymmetry, index: [0; 4] });
    }
    let mut m = a.rows();
    let mut v: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();

    let off_norm = |m: &[Vec<f64>]| {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += 2.0 * m[p][q] * m[p][q];
            }
        }
        libm::sqrt(s)
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&m);
        if off <= JACOBI_TOL * norm {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let t = 1.0 / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    if theta < 0.0 { -t } else { t }
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for row in m.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                for k in 0..n {
                    let (pk, qk) = (m[p][k], m[q][k]);
                    m[p][k] = c * pk - s * qk;
                    m[q][k] = s * pk + c * qk;
                }
                m[p][q] = 0.0;
                m[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].total_cmp(&m[j][j]));
    let values: Vec<f64> = order.iter().map(|&i| m[i][i]).collect();
    let vectors = order.iter().map(|&i| v.iter().map(|row| row[i]).collect()).collect();
    let mean = values.iter().sum::<f64>() / n as f64;
    Ok(Eigen { spectrum: Spectrum { values, mean }, vectors })
}

/// Sorted eigenvalues of `R̊` (always computed in `f64`).
pub fn second_kind_spectrum<T: Scalar>(r: &CurvatureTensor<T>) -> Result<Spectrum<f64>> {
    let basis = build_traceless_basis(r.n())?;
    let m = second_kind_matrix(&r.to_f64(), &basis)?;
    Ok(eigen_sym(&m)?.spectrum)
}

/// `k⁻¹(λ_1 + … + λ_k) ≥ −θ λ̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeCondition<T> {
    pub k: usize,
    pub theta: T,
}

impl<T: Scalar> ConeCondition<T> {
    pub fn new(k: usize, theta: T) -> Self {
        ConeCondition { k, theta }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeCheck<T> {
    pub holds: bool,
    /// `k⁻¹(λ_1 + … + λ_k) + θλ̄`.
    pub slack: T,
}

pub fn cone_check<T: Scalar>(spec: &Spectrum<T>, cond: &ConeCondition<T>) -> Result<ConeCheck<T>> {
    if cond.k == 0 || cond.k > spec.len() {
        return Err(Error::KOutOfRange { k: cond.k, max: spec.len() });
    }
    let lhs = spec.partial_sum(cond.k) / T::from_usize(cond.k);
    let slack = lhs + cond.theta.clone() * spec.mean().clone();
    let holds = slack.is_nonneg_within(CONE_SLACK_TOL * spec.mean().to_f64().abs());
    Ok(ConeCheck { holds, slack })
}

/// `D = ((N−1)kθ + N(k−1)) / (N−k)`: any nondecreasing sequence of length `N`
/// with mean `λ̄` satisfying the cone condition has `λ_1 ≥ −D λ̄`.
pub fn lambda1_bound<T: Scalar>(len: usize, cond: &ConeCondition<T>) -> Result<T> {
    let k = cond.k;
    if k == 0 || k >= len {
        return Err(Error::KOutOfRange { k, max: len.saturating_sub(1) });
    }
    let (nn, kk) = (T::from_usize(len), T::from_usize(k));
    Ok((T::from_usize(len - 1) * kk * cond.theta.clone() + nn * T::from_usize(k - 1))
        / T::from_usize(len - k))
}

/// Outcome of [`weighted_sum_bound`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSumBound<T> {
    /// `S = Σ w_i`.
    pub total_weight: T,
    /// `Σ λ_i w_i`.
    pub weighted_sum: T,
    /// `(S − kM) λ_{k+1} + M Σ_{i≤k} λ_i`, the intermediate lower bound.
    pub chain: T,
    /// `−S θ λ̄`.
    pub bound: T,
    pub holds: bool,
}

/// Lower bound `Σ λ_i w_i ≥ −S θ λ̄` for weights `0 ≤ w_i ≤ M` with
/// `k ≤ ⌊S/M⌋`, under the cone condition `(k, θ)`. The weights pair with the
/// sorted eigenvalues. Every violated precondition is reported.
pub fn weighted_sum_bound<T: Scalar>(
    spec: &Spectrum<T>,
    weights: &[T],
    m_bound: &T,
    cond: &ConeCondition<T>,
) -> Result<WeightedSumBound<T>> {
    let len = spec.len();
    if weights.len() != len {
        return Err(Error::DimensionMismatch { expected: len, found: weights.len() });
    }
    if cond.k == 0 || cond.k > len {
        return Err(Error::KOutOfRange { k: cond.k, max: len });
    }
    let tol = CONE_SLACK_TOL * m_bound.to_f64().abs().max(1.0);
    let mut violations: Vec<String> = Vec::new();
    if !m_bound.is_positive() {
        violations.push(format!("M = {m_bound} must be positive"));
    }
    for (i, w) in weights.iter().enumerate() {
        if !w.is_nonneg_within(tol) || !(m_bound.clone() - w.clone()).is_nonneg_within(tol) {
            violations.push(format!("weight {i} = {w} outside [0, M]"));
        }
    }
    let total_weight = scalar::sum(weights.iter().cloned());
    let k = T::from_usize(cond.k);
    if !(total_weight.clone() - k.clone() * m_bound.clone()).is_nonneg_within(tol * len as f64) {
        violations.push(format!("k = {} exceeds floor(S/M) with S = {total_weight}", cond.k));
    }
    match cone_check(spec, cond) {
        Ok(c) if !c.holds => violations.push(format!("cone condition fails (slack {})", c.slack)),
        Ok(_) => {}
        Err(e) => violations.push(format!("{e}")),
    }
    if cond.theta.is_positive() && spec.mean().is_negative() {
        violations.push(format!("mean {} must be >= 0 when theta > 0", spec.mean()));
    }
    if !violations.is_empty() {
        return Err(Error::Preconditions(violations));
    }

    let values = spec.values();
    let weighted_sum = values
        .iter()
        .zip(weights)
        .fold(T::zero(), |acc, (l, w)| acc + l.clone() * w.clone());
    let head = values.get(cond.k).cloned().unwrap_or_else(T::zero);
    let chain = (total_weight.clone() - k * m_bound.clone()) * head
        + m_bound.clone() * spec.partial_sum(cond.k);
    let bound = -(total_weight.clone() * cond.theta.clone() * spec.mean().clone());
    let scale = values.iter().zip(weights).map(|(l, w)| (l.to_f64() * w.to_f64()).abs()).sum::<f64>();
    let holds = (weighted_sum.clone() - bound.clone()).is_nonneg_within(CONE_SLACK_TOL * scale.max(1.0));
    Ok(WeightedSumBound { total_weight, weighted_sum, chain, bound, holds })
}
