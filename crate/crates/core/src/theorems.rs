//! The classification table of rigidity constants and a hypothesis checker
//! for concrete spectra.
//!
//! Rows come from the Jack–Parker certificates for `n = 4, 5` (`k ≤ 3`) and
//! from the cone-condition estimate for `n ≥ 6` (`k ≤ ⌊(n+2)/4⌋`). A row is
//! admissible iff its `θ` is non-negative; for `n ≥ 6` that is the same as
//! `k ≤` [`k_admissibility_bound`]. `θ = 0` rows count as admissible.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;

use crate::bochner::{solve_theta, traceless_dim, Source, ThetaCertificate};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::spectra::{cone_check, ConeCondition, Spectrum};
use crate::tensor::{assemble_einstein, EinsteinData};

/// Upper bound on `k` for which the matched `θ` is non-negative:
/// `(2N(N+3) − 3nN) / (3n(N−3) + 2N + 6)`.
pub fn k_admissibility_bound(n: usize) -> Result<Rational> {
    if n < 4 {
        return Err(Error::InvalidDimension { n, min: 4 });
    }
    let nn = traceless_dim(n) as i64;
    let d = n as i64;
    Ok(<Rational as Scalar>::ratio(2 * nn * (nn + 3) - 3 * d * nn, 3 * d * (nn - 3) + 2 * nn + 6))
}

/// `⌊(n+2)/4⌋`.
pub fn k_floor(n: usize) -> usize {
    (n + 2) / 4
}

/// Which stated theorem covers dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// `n ≥ 8`, `n ≠ 10`.
    A,
    /// `n = 4, 5`.
    B,
    /// `n = 6, 7, 10`.
    C,
}

impl Theorem {
    pub fn for_dimension(n: usize) -> Self {
        match n {
            4 | 5 => Theorem::B,
            6 | 7 | 10 => Theorem::C,
            _ => Theorem::A,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::A => "A",
            Theorem::B => "B",
            Theorem::C => "C",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Admissibility {
    Admissible,
    /// The matched `θ` is negative, so no cone condition results.
    NegativeTheta(Rational),
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }
}

impl fmt::Display for Admissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Admissibility::Admissible => f.write_str("admissible"),
            Admissibility::NegativeTheta(t) => write!(f, "inadmissible(negative theta {t})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationRow {
    pub n: usize,
    pub k: usize,
    pub theta: Rational,
    /// `kθ`.
    pub sum_form: Rational,
    pub source: Source,
    pub admissibility: Admissibility,
    /// `θ < 2(n−1)/(n+2)`.
    pub li_applicable: bool,
    pub k_bound: Rational,
    pub theorem: Theorem,
    pub note: Option<&'static str>,
    pub certificate: ThetaCertificate,
}

impl ClassificationRow {
    pub fn is_admissible(&self) -> bool {
        self.admissibility.is_admissible()
    }

    /// `k⁻¹(λ_1 + … + λ_k) ≥ −θλ̄` in the requested backend.
    pub fn cone<T: Scalar>(&self) -> ConeCondition<T> {
        ConeCondition::new(self.k, T::from_rational(&self.theta))
    }
}

/// `k` values tabulated for dimension `n`.
pub fn table_ks(n: usize) -> RangeInclusive<usize> {
    if n == 4 || n == 5 { 1..=3 } else { 1..=k_floor(n) }
}

/// The row for `(n, k)`.
pub fn build_row(n: usize, k: usize) -> Result<ClassificationRow> {
    let certificate = solve_theta(n, k)?;
    let theta = certificate.theta.clone();
    let admissibility = if certificate.theta_nonnegative {
        Admissibility::Admissible
    } else {
        Admissibility::NegativeTheta(theta.clone())
    };
    let note = (!certificate.li_applicable && certificate.theta_nonnegative)
        .then_some("theta is at least 2(n-1)/(n+2); Li's classification does not apply and another rigidity result is needed");
    Ok(ClassificationRow {
        n,
        k,
        sum_form: certificate.sum_form(),
        source: certificate.source,
        admissibility,
        li_applicable: certificate.li_applicable,
        k_bound: k_admissibility_bound(n)?,
        theorem: Theorem::for_dimension(n),
        note,
        theta,
        certificate,
    })
}

/// Rows for every `n` in `dims` and every tabulated `k`.
pub fn build_table(dims: RangeInclusive<usize>) -> Result<Vec<ClassificationRow>> {
    let mut rows = Vec::new();
    for n in dims {
        if n < 4 {
            return Err(Error::InvalidDimension { n, min: 4 });
        }
        for k in table_ks(n) {
            rows.push(build_row(n, k)?);
        }
    }
    Ok(rows)
}

/// One cone-condition test inside a [`Verdict`].
#[derive(Debug, Clone, PartialEq)]
pub struct RowCheck<T> {
    pub k: usize,
    pub theta: Rational,
    pub holds: bool,
    pub slack: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Conclusion {
    /// `λ̄ = 0`.
    Flat,
    /// Some admissible cone condition holds.
    Satisfied(Theorem),
    NoTheorem,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict<T> {
    pub n: usize,
    pub mean: T,
    pub checks: Vec<RowCheck<T>>,
    pub conclusion: Conclusion,
}

impl<T> Verdict<T> {
    pub fn message(&self) -> String {
        match self.conclusion {
            Conclusion::Flat => "flat branch: mean eigenvalue is zero => flat".into(),
            Conclusion::Satisfied(t) => format!("hypotheses of Theorem {t} satisfied => flat or spherical space form"),
            Conclusion::NoTheorem => "no theorem applies".into(),
        }
    }
}

/// Relative threshold for the flat branch in float mode.
pub const FLAT_TOL: f64 = 1e-12;

fn is_flat<T: Scalar>(spec: &Spectrum<T>) -> bool {
    if T::EXACT {
        return spec.mean().is_zero();
    }
    let scale = spec.values().iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
    spec.mean().to_f64().abs() <= FLAT_TOL * scale
}

/// Checks every admissible cone condition for dimension `n` against `spec`.
/// Purely a hypothesis checker.
pub fn verdict<T: Scalar>(spec: &Spectrum<T>, n: usize) -> Result<Verdict<T>> {
    if n < 4 {
        return Err(Error::InvalidDimension { n, min: 4 });
    }
    let nn = traceless_dim(n);
    if spec.len() != nn {
        return Err(Error::DimensionMismatch { expected: nn, found: spec.len() });
    }
    let mut checks = Vec::new();
    for k in table_ks(n) {
        let row = build_row(n, k)?;
        if !row.is_admissible() {
            continue;
        }
        let c = cone_check(spec, &row.cone())?;
        checks.push(RowCheck { k, theta: row.theta, holds: c.holds, slack: c.slack });
    }
    let conclusion = if is_flat(spec) {
        Conclusion::Flat
    } else if checks.iter().any(|c| c.holds) {
        Conclusion::Satisfied(Theorem::for_dimension(n))
    } else {
        Conclusion::NoTheorem
    };
    Ok(Verdict { n, mean: spec.mean().clone(), checks, conclusion })
}

/// [`verdict`] on the spectrum of an assembled Einstein tensor.
pub fn verdict_einstein<T: Scalar>(data: &EinsteinData<T>) -> Result<Verdict<f64>> {
    let r = assemble_einstein(data);
    let spec = crate::spectra::second_kind_spectrum(&r)?;
    verdict(&spec, data.n())
}
