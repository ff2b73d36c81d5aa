use alloc::vec::Vec;

use super::SymMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Orthogonal basis of the traceless symmetric 2-tensors `S₀²(R^n)`, with
/// `N = (n−1)(n+2)/2` elements.
///
/// Element order: the off-diagonal pairs `e_i⊗e_j + e_j⊗e_i` for `i < j` in
/// lexicographic order, then the diagonal elements
/// `diag(1, …, 1, −m, 0, …, 0)` (`m` ones) for `m = 1..n−1`.
///
/// [`build_traceless_basis`] normalizes these to unit Frobenius norm.
/// [`TracelessBasis::orthogonal`] keeps them unnormalized so the rational
/// backend stays exact; `norms_sq` then records `⟨Sᵃ, Sᵃ⟩` and all
/// basis-dependent quantities are divided through by it.
#[derive(Debug, Clone, PartialEq)]
pub struct TracelessBasis<T> {
    n: usize,
    elements: Vec<SymMatrix<T>>,
    norms_sq: Vec<T>,
    sparse: Vec<Vec<(usize, usize, T)>>,
}

/// Orthonormal basis of `S₀²(R^n)` in the fixed order described on
/// [`TracelessBasis`].
pub fn build_traceless_basis(n: usize) -> Result<TracelessBasis<f64>> {
    let raw = TracelessBasis::<f64>::orthogonal(n)?;
    let elements = raw
        .elements
        .iter()
        .zip(&raw.norms_sq)
        .map(|(e, nsq)| e.scale(&(1.0 / libm::sqrt(*nsq))))
        .collect();
    Ok(TracelessBasis::from_parts(n, elements))
}

impl<T: Scalar> TracelessBasis<T> {
    /// Unnormalized orthogonal basis with integer entries (exact in every
    /// backend).
    pub fn orthogonal(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension { n, min: 2 });
        }
        let mut elements = Vec::with_capacity((n - 1) * (n + 2) / 2);
        for i in 0..n {
            for j in i + 1..n {
                elements.push(SymMatrix::from_upper(n, |a, b| {
                    if a == i && b == j { T::one() } else { T::zero() }
                }));
            }
        }
        for m in 1..n {
            let diag: Vec<T> = (0..n)
                .map(|i| match i.cmp(&m) {
                    core::cmp::Ordering::Less => T::one(),
                    core::cmp::Ordering::Equal => -T::from_usize(m),
                    core::cmp::Ordering::Greater => T::zero(),
                })
                .collect();
            elements.push(SymMatrix::diagonal(&diag));
        }
        Ok(Self::from_parts(n, elements))
    }

    /// Wraps a list of mutually orthogonal traceless symmetric matrices.
    pub fn from_elements(n: usize, elements: Vec<SymMatrix<T>>) -> Result<Self> {
        let expected = (n - 1) * (n + 2) / 2;
        if elements.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: elements.len() });
        }
        if let Some(bad) = elements.iter().find(|e| e.n() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.n() });
        }
        let basis = Self::from_parts(n, elements);
        basis.check()?;
        Ok(basis)
    }

    fn from_parts(n: usize, elements: Vec<SymMatrix<T>>) -> Self {
        let norms_sq = elements.iter().map(|e| e.frobenius(e)).collect();
        let sparse = elements.iter().map(SymMatrix::nonzeros).collect();
        TracelessBasis { n, elements, norms_sq, sparse }
    }

    /// Trace-free and pairwise-orthogonal checks.
    pub fn check(&self) -> Result<()> {
        for (a, e) in self.elements.iter().enumerate() {
            if !e.trace().is_negligible(1.0) {
                return Err(Error::CheckFailed(alloc::format!("basis element {a} has nonzero trace")));
            }
            for (b, f) in self.elements.iter().enumerate().skip(a + 1) {
                if !e.frobenius(f).is_negligible(1.0) {
                    return Err(Error::CheckFailed(alloc::format!(
                        "basis elements {a} and {b} are not orthogonal"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N = (n−1)(n+2)/2`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[SymMatrix<T>] {
        &self.elements
    }

    pub fn norms_sq(&self) -> &[T] {
        &self.norms_sq
    }

    pub(crate) fn sparse(&self, a: usize) -> &[(usize, usize, T)] {
        &self.sparse[a]
    }

    /// Gram matrix `⟨Sᵃ, Sᵇ⟩`.
    pub fn gram(&self) -> SymMatrix<T> {
        SymMatrix::from_upper(self.len(), |a, b| self.elements[a].frobenius(&self.elements[b]))
    }

    /// The matrix `Σ_a x_a Sᵃ`.
    pub fn combine(&self, coeffs: &[T]) -> SymMatrix<T> {
        self.elements
            .iter()
            .zip(coeffs)
            .fold(SymMatrix::zeros(self.n), |acc, (e, c)| acc.add_scaled(c, e))
    }
}

impl TracelessBasis<f64> {
    /// Basis `Σ_b q[a][b] Sᵇ` for an orthogonal `N × N` matrix `q`.
    pub fn rotated(&self, q: &[Vec<f64>]) -> Result<Self> {
        if q.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: q.len() });
        }
        let elements = q.iter().map(|row| self.combine(row)).collect();
        Self::from_elements(self.n, elements)
    }

    pub fn is_orthonormal(&self, tol: f64) -> bool {
        let g = self.gram();
        (0..self.len()).all(|a| {
            (0..self.len()).all(|b| {
                let target = if a == b { 1.0 } else { 0.0 };
                (g.get(a, b) - target).abs() <= tol
            })
        })
    }
}
