//! Dense tensors on Euclidean `n`-space and the curvature operators built on
//! them.
//!
//! Components are always taken in the standard orthonormal basis `e_1..e_n`,
//! so index position carries no variance and contractions are plain sums.
//! Indices are 0-based throughout.

mod basis;
mod curvature;
mod operators;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Identity, Result};
use crate::scalar::Scalar;

pub use basis::{build_traceless_basis, TracelessBasis};
pub use curvature::{
    assemble_einstein, check_curvature_identities, kulkarni_nomizu, kulkarni_nomizu_gg,
    project_to_weyl, CurvatureTensor, EinsteinData,
};
pub use operators::{
    act, first_kind_matrix, max_unit_action_norm, s02_action_norm_sum, second_kind_matrix,
    second_kind_square_trace, second_kind_trace,
};

/// Dense `rank`-index array over `R^n`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<T> {
    n: usize,
    rank: usize,
    data: Vec<T>,
}

impl<T: Scalar> Tensor<T> {
    pub fn zeros(n: usize, rank: usize) -> Self {
        Tensor { n, rank, data: vec![T::zero(); n.pow(rank as u32)] }
    }

    /// Builds a tensor by evaluating `f` at every multi-index in row-major
    /// order.
    pub fn from_fn(n: usize, rank: usize, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let len = n.pow(rank as u32);
        let mut idx = vec![0usize; rank];
        let mut data = Vec::with_capacity(len);
        for _ in 0..len {
            data.push(f(&idx));
            for slot in (0..rank).rev() {
                idx[slot] += 1;
                if idx[slot] < n {
                    break;
                }
                idx[slot] = 0;
            }
        }
        Tensor { n, rank, data }
    }

    pub fn from_vec(n: usize, rank: usize, data: Vec<T>) -> Result<Self> {
        let expected = n.pow(rank as u32);
        if data.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: data.len() });
        }
        Ok(Tensor { n, rank, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn get(&self, idx: &[usize]) -> &T {
        &self.data[self.offset(idx)]
    }

    pub fn get_mut(&mut self, idx: &[usize]) -> &mut T {
        let o = self.offset(idx);
        &mut self.data[o]
    }

    /// Full-contraction inner product `Σ A_{i..} B_{i..}`.
    pub fn inner(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Full-contraction squared norm.
    pub fn norm_sq(&self) -> T {
        self.inner(self)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl FnMut(&T) -> U) -> Tensor<U> {
        Tensor { n: self.n, rank: self.rank, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Tensor<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(&T, &T) -> T) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Tensor { n: self.n, rank: self.rank, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    /// Largest absolute component, as `f64`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Rank-4 tensor with components `out[i0][i1][i2][i3] = self[i_p0][i_p1][i_p2][i_p3]`.
    pub fn permuted4(&self, perm: [usize; 4]) -> Self {
        assert_eq!(self.rank, 4);
        Tensor::from_fn(self.n, 4, |idx| self[[idx[perm[0]], idx[perm[1]], idx[perm[2]], idx[perm[3]]]].clone())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        if self.rank != other.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: other.rank });
        }
        Ok(())
    }
}

impl<T> Index<[usize; 4]> for Tensor<T> {
    type Output = T;

    fn index(&self, [i, j, k, l]: [usize; 4]) -> &T {
        debug_assert_eq!(self.rank, 4);
        let n = self.n;
        &self.data[((i * n + j) * n + k) * n + l]
    }
}

impl<T> IndexMut<[usize; 4]> for Tensor<T> {
    fn index_mut(&mut self, [i, j, k, l]: [usize; 4]) -> &mut T {
        debug_assert_eq!(self.rank, 4);
        let n = self.n;
        &mut self.data[((i * n + j) * n + k) * n + l]
    }
}

/// Symmetric `n × n` matrix, stored in full.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn diagonal(values: &[T]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = v.clone();
        }
        m
    }

    /// Evaluates `f(i, j)` for `i <= j` and mirrors the result.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.data[j * n + i] = v.clone();
                m.data[i * n + j] = v;
            }
        }
        m
    }

    /// Checks symmetry (exactly, or to `1e-12·‖A‖` for floats) and stores the
    /// symmetrized matrix.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        let norm = libm::sqrt(
            rows.iter().flatten().map(|v| v.to_f64() * v.to_f64()).sum::<f64>(),
        );
        for i in 0..n {
            for j in i + 1..n {
                let d = rows[i][j].clone() - rows[j][i].clone();
                if !d.is_negligible(norm) {
                    return Err(Error::IdentityViolated {
                        identity: Identity::MatrixSymmetry,
                        index: [i, j, 0, 0],
                    });
                }
            }
        }
        let two = T::from_int(2);
        Ok(Self::from_upper(n, |i, j| {
            if i == j {
                rows[i][i].clone()
            } else {
                (rows[i][j].clone() + rows[j][i].clone()) / two.clone()
            }
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Frobenius inner product `Σ A_ij B_ij`.
    pub fn frobenius(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.frobenius(self).to_f64().abs())
    }

    pub fn scale(&self, c: &T) -> Self {
        SymMatrix { n: self.n, data: self.data.iter().map(|v| v.clone() * c.clone()).collect() }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: &T, other: &Self) -> Self {
        SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + c.clone() * b.clone())
                .collect(),
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(T::zero(), |acc, j| acc + self.get(i, j).clone() * x[j].clone())
            })
            .collect()
    }

    /// Nonzero entries `(i, j, value)`, row-major.
    pub fn nonzeros(&self) -> Vec<(usize, usize, T)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                if !v.is_zero() {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }

    pub fn to_f64(&self) -> SymMatrix<f64> {
        SymMatrix { n: self.n, data: self.data.iter().map(Scalar::to_f64).collect() }
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max((self.get(i, j).to_f64() - self.get(j, i).to_f64()).abs());
            }
        }
        worst
    }
}
