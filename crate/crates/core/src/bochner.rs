//! Cubic Bochner functionals in the second-kind eigenvalues and exact
//! rational rigidity constants `θ(n, k)`.
//!
//! A [`BochnerCubic`] is `a Σλ³ + b λ̄ Σλ² + c λ̄³` on spectra of length
//! `N = (n−1)(n+2)/2`. Two families appear:
//!
//! - the lower estimate for `3⟨ΔR, R⟩` under a cone condition `(k, θ)`
//!   ([`df_estimate_cubic`], valid for `n ≥ 6`), and
//! - the exact Jack–Parker expression for `⟨ΔR, R⟩` in dimensions 4 and 5
//!   ([`jp_cubic`]).
//!
//! Shifting `β_i = λ_i + D λ̄` with `D` from [`lambda1_bound`] moves the
//! cone-constrained spectra into the simplex `β ≥ 0, Σβ = N(1+D) λ̄`.
//! `θ` is chosen so that the `Σβ²` coefficient equals
//! `−a (2N−1)(1+D)/(N−1)`; after rescaling, the cubic becomes
//! `Σx³ − Σx²` on the simplex of total `N(N−1)/(2N−1)`, whose minimum is
//! attained at the constant point and at `(0, C/(N−1), …)`.
//! A [`ThetaCertificate`] records `θ`, `D`, both minimizers and the exact
//! residues proving that the minimum is zero.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::optimize::{minimize_on_simplex, PgdOptions};
use crate::random::{dirichlet, trial_rng};
use crate::scalar::{self, Rational, Scalar};
use crate::spectra::{lambda1_bound, ConeCondition};

/// `N = (n−1)(n+2)/2`, the dimension of the traceless symmetric 2-tensors.
pub fn traceless_dim(n: usize) -> usize {
    (n - 1) * (n + 2) / 2
}

/// `a Σλ_i³ + b λ̄ Σλ_i² + c λ̄³`.
#[derive(Debug, Clone, PartialEq)]
pub struct BochnerCubic<T> {
    pub n: usize,
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Scalar> BochnerCubic<T> {
    /// `N` for this dimension.
    pub fn len(&self) -> usize {
        traceless_dim(self.n)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Evaluates with an explicit `λ̄` (which the caller guarantees is the
    /// mean of `lambdas` when that matters).
    pub fn evaluate_with_mean(&self, lambdas: &[T], mean: &T) -> T {
        let cubes = scalar::sum(lambdas.iter().map(scalar::pow3));
        let squares = scalar::sum(lambdas.iter().map(|l| l.clone() * l.clone()));
        self.a.clone() * cubes + self.b.clone() * mean.clone() * squares + self.c.clone() * scalar::pow3(mean)
    }

    /// Evaluates with `λ̄` the mean of `lambdas`.
    pub fn evaluate(&self, lambdas: &[T]) -> T {
        self.evaluate_with_mean(lambdas, &scalar::mean(lambdas))
    }

    pub fn scale(&self, t: &T) -> Self {
        BochnerCubic {
            n: self.n,
            a: self.a.clone() * t.clone(),
            b: self.b.clone() * t.clone(),
            c: self.c.clone() * t.clone(),
        }
    }

    pub fn to_f64(&self) -> BochnerCubic<f64> {
        BochnerCubic { n: self.n, a: self.a.to_f64(), b: self.b.to_f64(), c: self.c.to_f64() }
    }
}

/// Right-hand side of the cone-condition estimate for `3⟨ΔR, R⟩`:
/// `a = 16`, `b = (16/3n)(2N − 12n + 6 − (N−3)θ)`,
/// `c = −(16N/3n)(2N − 9n + 6 − (N−3)θ)`.
pub fn df_estimate_cubic<T: Scalar>(n: usize, theta: &T) -> Result<BochnerCubic<T>> {
    if n < 4 {
        return Err(Error::InvalidDimension { n, min: 4 });
    }
    let nn = traceless_dim(n) as i64;
    let d = n as i64;
    let tail = T::from_int(nn - 3) * theta.clone();
    let sixteen = T::from_int(16);
    let b = sixteen.clone() / T::from_int(3 * d) * (T::from_int(2 * nn - 12 * d + 6) - tail.clone());
    let c = -(sixteen.clone() * T::from_int(nn) / T::from_int(3 * d) * (T::from_int(2 * nn - 9 * d + 6) - tail));
    Ok(BochnerCubic { n, a: sixteen, b, c })
}

/// Spectral part of the Einstein Bochner formula,
/// `16Σλ³ + (16(2N−12n+6)/3n) λ̄Σλ² − (16N(2N−9n+6)/3n) λ̄³`, which equals
/// `3⟨ΔR, R⟩ − Σλ_i |SⁱW|²`.
pub fn sum_lambda_w_identity_rhs<T: Scalar>(n: usize, lambdas: &[T]) -> Result<T> {
    let nn = traceless_dim(n.max(2));
    if lambdas.len() != nn {
        return Err(Error::DimensionMismatch { expected: nn, found: lambdas.len() });
    }
    Ok(df_estimate_cubic(n, &T::zero())?.evaluate(lambdas))
}

/// Jack–Parker expression for `⟨ΔR, R⟩` in dimensions 4 and 5:
/// `(8, 8(n−4)/3, −4(n+2)(n−1)²/3)`.
pub fn jp_cubic<T: Scalar>(n: usize) -> Result<BochnerCubic<T>> {
    if !(4..=5).contains(&n) {
        return Err(Error::UnsupportedDimension { n, reason: "the Jack-Parker cubic is used only for n = 4, 5" });
    }
    let d = n as i64;
    Ok(BochnerCubic {
        n,
        a: T::from_int(8),
        b: T::ratio(8 * (d - 4), 3),
        c: T::ratio(-4 * (d + 2) * (d - 1) * (d - 1), 3),
    })
}

/// A cubic rewritten in `β_i = λ_i + Dλ̄` on the hyperplane
/// `Σβ = N(1+D)λ̄`: `a Σβ³ + b λ̄ Σβ² + g λ̄³`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaForm<T> {
    pub n: usize,
    pub d: T,
    pub a: T,
    pub b: T,
    /// The constant term `G`.
    pub g: T,
}

impl<T: Scalar> BetaForm<T> {
    pub fn evaluate(&self, betas: &[T], mean: &T) -> T {
        let cubes = scalar::sum(betas.iter().map(scalar::pow3));
        let squares = scalar::sum(betas.iter().map(|l| l.clone() * l.clone()));
        self.a.clone() * cubes + self.b.clone() * mean.clone() * squares + self.g.clone() * scalar::pow3(mean)
    }
}

/// Expands the cubic under `λ_i = β_i − Dλ̄`, using `Σβ = N(1+D)λ̄`:
/// `a' = a`, `b' = b − 3aD`, `G = c + aN D²(3 + 2D) − bN D(2 + D)`.
pub fn beta_substitute<T: Scalar>(cubic: &BochnerCubic<T>, d: &T) -> BetaForm<T> {
    let nn = T::from_usize(cubic.len());
    let two = T::from_int(2);
    let three = T::from_int(3);
    let b = cubic.b.clone() - three.clone() * cubic.a.clone() * d.clone();
    let g = cubic.c.clone()
        + cubic.a.clone() * nn.clone() * d.clone() * d.clone() * (three + two.clone() * d.clone())
        - cubic.b.clone() * nn * d.clone() * (two + d.clone());
    BetaForm { n: cubic.n, d: d.clone(), a: cubic.a.clone(), b, g }
}

/// `b/a − 3D + (2N−1)(1+D)/(N−1)`; zero iff the `Σβ²` coefficient is the one
/// that turns the cubic into a multiple of `Σx³ − Σx²` at total
/// `N(N−1)/(2N−1)`.
pub fn matching_residue<T: Scalar>(cubic: &BochnerCubic<T>, d: &T) -> T {
    let nn = cubic.len() as i64;
    cubic.b.clone() / cubic.a.clone() - T::from_int(3) * d.clone()
        + T::ratio(2 * nn - 1, nn - 1) * (T::one() + d.clone())
}

/// Closed form of the matched `θ` for the cone-condition estimate:
/// `((N−k)(2N−9n+6) − 3nN(k−2)) / ((N−3)(N−k) + 3kn(N−2))`.
pub fn df_theta(n: usize, k: usize) -> Result<Rational> {
    let nn = traceless_dim(n) as i64;
    let (d, kk) = (n as i64, k as i64);
    let num = (nn - kk) * (2 * nn - 9 * d + 6) - 3 * d * nn * (kk - 2);
    let den = (nn - 3) * (nn - kk) + 3 * kk * d * (nn - 2);
    if den == 0 {
        return Err(Error::Degenerate { n, k, reason: "zero denominator in the theta formula" });
    }
    Ok(<Rational as Scalar>::ratio(num, den))
}

/// Which Bochner identity a certificate is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Cone-condition estimate derived from the Dai–Fu formula (`n ≥ 6`).
    DaiFu,
    /// Jack–Parker expression (`n = 4, 5`).
    JackParker,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::DaiFu => "DF",
            Source::JackParker => "JP",
        })
    }
}

/// `2(n−1)/(n+2)`, the upper limit on `θ` for the cone-condition
/// classification of locally symmetric spaces to apply.
pub fn li_threshold(n: usize) -> Rational {
    <Rational as Scalar>::ratio(2 * (n as i64 - 1), n as i64 + 2)
}

/// Exact rigidity constant with its supporting data. Spectra are stored as
/// multiples of `λ̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaCertificate {
    pub n: usize,
    pub k: usize,
    pub source: Source,
    pub theta: Rational,
    pub d: Rational,
    /// The estimate as a function of `λ` at this `θ`.
    pub cubic: BochnerCubic<Rational>,
    pub beta_form: BetaForm<Rational>,
    /// `(1, …, 1)`.
    pub point1: Vec<Rational>,
    /// `(−D, (N+D)/(N−1), …, (N+D)/(N−1))`.
    pub point2: Vec<Rational>,
    pub matching_residue: Rational,
    pub residue_point1: Rational,
    pub residue_point2: Rational,
    pub theta_nonnegative: bool,
    /// `θ < 2(n−1)/(n+2)`.
    pub li_applicable: bool,
    /// `k ≤ ⌊(n+2)/4⌋`.
    pub k_within_floor: bool,
}

impl ThetaCertificate {
    /// All three residues vanish.
    pub fn is_valid(&self) -> bool {
        use num_traits::Zero;
        self.matching_residue.is_zero() && self.residue_point1.is_zero() && self.residue_point2.is_zero()
    }

    /// `kθ`, the constant in `λ_1 + … + λ_k ≥ −kθ λ̄`.
    pub fn sum_form(&self) -> Rational {
        self.theta.clone() * <Rational as Scalar>::from_usize(self.k)
    }

    pub fn len(&self) -> usize {
        traceless_dim(self.n)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn certify(n: usize, k: usize, source: Source, theta: Rational, d: Rational, cubic: BochnerCubic<Rational>) -> ThetaCertificate {
    use num_traits::{One, Signed};
    let nn = traceless_dim(n);
    let one = Rational::one();
    let point1 = vec![one.clone(); nn];
    let rest = (<Rational as Scalar>::from_usize(nn) + d.clone()) / <Rational as Scalar>::from_usize(nn - 1);
    let mut point2 = vec![rest; nn];
    point2[0] = -d.clone();
    let residue_point1 = cubic.evaluate_with_mean(&point1, &one);
    let residue_point2 = cubic.evaluate_with_mean(&point2, &one);
    ThetaCertificate {
        n,
        k,
        source,
        matching_residue: matching_residue(&cubic, &d),
        beta_form: beta_substitute(&cubic, &d),
        theta_nonnegative: !theta.is_negative(),
        li_applicable: theta < li_threshold(n),
        k_within_floor: k <= (n + 2) / 4,
        theta,
        d,
        cubic,
        point1,
        point2,
        residue_point1,
        residue_point2,
    }
}

/// `θ(n, k)` for the cone-condition estimate, with `D` and both minimizers.
pub fn solve_theta_df(n: usize, k: usize) -> Result<ThetaCertificate> {
    if n < 4 {
        return Err(Error::InvalidDimension { n, min: 4 });
    }
    let nn = traceless_dim(n);
    if k == 0 || k >= nn {
        return Err(Error::KOutOfRange { k, max: nn - 1 });
    }
    let theta = df_theta(n, k)?;
    let d = lambda1_bound(nn, &ConeCondition::new(k, theta.clone()))?;
    let cubic = df_estimate_cubic(n, &theta)?;
    Ok(certify(n, k, Source::DaiFu, theta, d, cubic))
}

/// `θ(n, k)` from the Jack–Parker cubic, `n ∈ {4, 5}`, `1 ≤ k ≤ 3`.
///
/// The cubic has no `θ` term, so the matching equation fixes
/// `D = (b/a + r)/(3 − r)` with `r = (2N−1)/(N−1)`; `θ` then follows by
/// inverting `D = ((N−1)kθ + N(k−1))/(N−k)`.
pub fn solve_theta_jp(n: usize, k: usize) -> Result<ThetaCertificate> {
    let cubic = jp_cubic::<Rational>(n)?;
    if !(1..=3).contains(&k) {
        return Err(Error::KOutOfRange { k, max: 3 });
    }
    let nn = traceless_dim(n) as i64;
    let kk = k as i64;
    let r = <Rational as Scalar>::ratio(2 * nn - 1, nn - 1);
    let d = (cubic.b.clone() / cubic.a.clone() + r.clone()) / (<Rational as Scalar>::from_int(3) - r);
    let theta = (d.clone() * <Rational as Scalar>::from_int(nn - kk) - <Rational as Scalar>::from_int(nn * (kk - 1)))
        / <Rational as Scalar>::from_int((nn - 1) * kk);
    Ok(certify(n, k, Source::JackParker, theta, d, cubic))
}

/// Certificate for `(n, k)` from the identity appropriate to `n`.
pub fn solve_theta(n: usize, k: usize) -> Result<ThetaCertificate> {
    if n == 4 || n == 5 { solve_theta_jp(n, k) } else { solve_theta_df(n, k) }
}

/// Smallest value found by [`estimate_min_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub min_value: f64,
    /// Spectrum (units of `λ̄`) where `min_value` was found.
    pub witness: Vec<f64>,
    /// `−1e−8·N`: the probe passes when `min_value ≥ threshold`.
    pub threshold: f64,
    pub passed: bool,
}

/// Relative floor for [`estimate_min_probe`].
pub const PROBE_TOL: f64 = 1e-8;

/// Searches for negative values of the certified estimate at `λ̄ = 1`.
///
/// Samples `β` uniformly on the simplex `β ≥ 0, Σβ = N(1+D)` (which contains
/// every cone-feasible spectrum), maps to `λ = β − D`, and polishes the best
/// samples with projected gradient descent.
pub fn estimate_min_probe(cert: &ThetaCertificate, trials: usize, seed: u64) -> Result<ProbeResult> {
    const POLISH: usize = 8;
    if trials == 0 {
        return Err(Error::Precondition("trials must be >= 1".into()));
    }
    let nn = cert.len();
    let cubic = cert.cubic.to_f64();
    let d = cert.d.to_f64();
    let total = nn as f64 * (1.0 + d);
    let f = |beta: &[f64]| {
        let lambdas: Vec<f64> = beta.iter().map(|b| b - d).collect();
        cubic.evaluate_with_mean(&lambdas, &1.0)
    };
    let grad = |beta: &[f64], g: &mut [f64]| {
        for (gi, b) in g.iter_mut().zip(beta) {
            let l = b - d;
            *gi = 3.0 * cubic.a * l * l + 2.0 * cubic.b * l;
        }
    };

    let mut samples: Vec<(f64, Vec<f64>)> = (0..trials)
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let beta = dirichlet(&mut rng, nn, total);
            (f(&beta), beta)
        })
        .collect();
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let opts = PgdOptions::default();
    let mut best = samples[0].clone();
    for (_, start) in samples.iter().take(POLISH) {
        let (x, fx) = minimize_on_simplex(start, total, &f, &grad, &opts);
        if fx < best.0 {
            best = (fx, x);
        }
    }
    let threshold = -PROBE_TOL * nn as f64;
    Ok(ProbeResult {
        min_value: best.0,
        witness: best.1.iter().map(|b| b - d).collect(),
        threshold,
        passed: best.0 >= threshold,
    })
}

/// `Σλ_i|SⁱW|² − (3·JP(λ) − rhs(λ))` for `n ∈ {4, 5}`, where `rhs` is
/// [`sum_lambda_w_identity_rhs`]. Zero when both Bochner identities hold for
/// the same curvature tensor. Diagnostic only.
pub fn cross_identity_gap(n: usize, lambdas: &[f64], weighted_sum: f64) -> Result<f64> {
    let jp = jp_cubic::<f64>(n)?.evaluate(lambdas);
    let rhs = sum_lambda_w_identity_rhs(n, lambdas)?;
    Ok(weighted_sum - (3.0 * jp - rhs))
}

/// `⌊(n+2)/4⌋`.
pub fn floor_k(n: usize) -> usize {
    (n + 2) / 4
}
