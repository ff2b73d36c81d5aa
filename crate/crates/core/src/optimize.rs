//! Minimization of `F(λ) = Σλ³ − Σλ²` over the simplex
//! `{λ ≥ 0, Σλ = C}`: analytic critical points, boundary minima and a
//! projected-gradient oracle.
//!
//! The interesting total is `C = N(N−1)/(2N−1)`, where the constant point
//! `(C/N, …)` and the boundary point `(0, C/(N−1), …)` tie.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

use crate::error::{Error, Result};
use crate::random::{dirichlet, trial_rng};
use crate::scalar::{self, Rational, Scalar};

/// `{λ ∈ ℝᴺ : λ ≥ 0, Σλ = C}` with `C > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexProblem<T> {
    count: usize,
    total: T,
}

/// Whether a critical point is interior or lies on a face with `k` zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalKind {
    /// `Q_k`: `k` entries equal to the smaller Lagrange root.
    Interior(usize),
    /// `k` zeros, remaining entries `C/(N−k)`.
    Boundary(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint<T> {
    pub kind: CriticalKind,
    pub point: Vec<T>,
    pub value: T,
    /// Lagrange multiplier `μ` in `3λ² − 2λ + μ = 0` (interior points only).
    pub multiplier: Option<T>,
    /// Interior points: `(C/9 − N/27)((3C−N)/(N−2k))² − C/3 + N/27`.
    pub closed_form_value: Option<T>,
    /// All entries non-negative.
    pub feasible: bool,
}

/// `Σλ³ − Σλ²`.
pub fn objective<T: Scalar>(x: &[T]) -> T {
    scalar::sum(x.iter().map(|v| scalar::pow3(v) - v.clone() * v.clone()))
}

/// `N(N−1)/(2N−1)`.
pub fn tie_total(count: usize) -> Rational {
    let c = count as i64;
    <Rational as Scalar>::ratio(c * (c - 1), 2 * c - 1)
}

impl<T: Scalar> SimplexProblem<T> {
    pub fn new(count: usize, total: T) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidDimension { n: count, min: 2 });
        }
        if total <= T::zero() {
            return Err(Error::Precondition(format!("C must be positive, got {total}")));
        }
        Ok(SimplexProblem { count, total })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn total(&self) -> &T {
        &self.total
    }

    /// `Q_k` for `0 ≤ k < N/2`. Requires `C > N/3`.
    pub fn interior_critical_points(&self) -> Result<Vec<CriticalPoint<T>>> {
        let n = self.count;
        let nn = T::from_usize(n);
        let three = T::from_int(3);
        let c = self.total.clone();
        if three.clone() * c.clone() <= nn {
            return Err(Error::OutOfRegime { c: format!("{c}"), threshold: format!("{}", nn.clone() / three) });
        }
        let mut out = Vec::new();
        for k in 0..n.div_ceil(2) {
            let root = (three.clone() * c.clone() - nn.clone()) / T::from_usize(n - 2 * k);
            let mu = (T::one() - root.clone() * root.clone()) / three.clone();
            let a = (T::one() - root.clone()) / three.clone();
            let b = (T::one() + root.clone()) / three.clone();
            let mut point = vec![a.clone(); k];
            point.extend(core::iter::repeat_n(b, n - k));
            let closed = (c.clone() / T::from_int(9) - nn.clone() / T::from_int(27)) * root.clone() * root
                - c.clone() / three.clone()
                + nn.clone() / T::from_int(27);
            out.push(CriticalPoint {
                kind: CriticalKind::Interior(k),
                value: objective(&point),
                feasible: k == 0 || a.is_nonneg_within(0.0),
                point,
                multiplier: Some(mu),
                closed_form_value: Some(closed),
            });
        }
        Ok(out)
    }

    /// Point with `k` zeros and `N−k` entries `C/(N−k)`.
    pub fn boundary_point(&self, k: usize) -> CriticalPoint<T> {
        let m = T::from_usize(self.count - k);
        let v = self.total.clone() / m.clone();
        let mut point = vec![T::zero(); k];
        point.extend(core::iter::repeat_n(v, self.count - k));
        let c = self.total.clone();
        CriticalPoint {
            kind: CriticalKind::Boundary(k),
            value: scalar::pow3(&c) / (m.clone() * m.clone()) - c.clone() * c / m,
            point,
            multiplier: None,
            closed_form_value: None,
            feasible: true,
        }
    }

    /// Minimum of `C³/(N−k)² − C²/(N−k)` over `1 ≤ k < N`, ties toward
    /// smaller `k`.
    pub fn boundary_minimum(&self) -> CriticalPoint<T> {
        let mut best = self.boundary_point(1);
        for k in 2..self.count {
            let cand = self.boundary_point(k);
            if cand.value < best.value {
                best = cand;
            }
        }
        best
    }

    /// Smaller of `F(Q₀)` and the boundary minimum. Requires `C > N/3`.
    pub fn analytic_minimum(&self) -> Result<T> {
        let q0 = self.interior_critical_points()?.swap_remove(0).value;
        let b = self.boundary_minimum().value;
        Ok(if b < q0 { b } else { q0 })
    }
}

/// Euclidean projection onto `{x ≥ 0, Σx = total}` (sort-based).
pub fn project_onto_simplex(v: &[f64], total: f64) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (j, uj) in u.iter().enumerate() {
        cumulative += uj;
        let t = (cumulative - total) / (j + 1) as f64;
        if uj - t > 0.0 {
            shift = t;
        }
    }
    v.iter().map(|x| (x - shift).max(0.0)).collect()
}

/// Projected-gradient settings.
#[derive(Debug, Clone, PartialEq)]
pub struct PgdOptions {
    pub max_iters: usize,
    pub initial_step: f64,
    /// Stop once a step moves less than this (Euclidean).
    pub step_tol: f64,
}

impl Default for PgdOptions {
    fn default() -> Self {
        PgdOptions { max_iters: 20_000, initial_step: 0.1, step_tol: 1e-13 }
    }
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Projected gradient descent on `{x ≥ 0, Σx = total}` with backtracking
/// on the usual quadratic upper-bound test.
pub fn minimize_on_simplex(
    x0: &[f64],
    total: f64,
    f: &dyn Fn(&[f64]) -> f64,
    grad: &dyn Fn(&[f64], &mut [f64]),
    opts: &PgdOptions,
) -> (Vec<f64>, f64) {
    let mut x = project_onto_simplex(x0, total);
    let mut fx = f(&x);
    let mut g = vec![0.0; x.len()];
    let mut step = opts.initial_step;
    for _ in 0..opts.max_iters {
        grad(&x, &mut g);
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
            let y = project_onto_simplex(&trial, total);
            let fy = f(&y);
            let lin: f64 = g.iter().zip(y.iter().zip(&x)).map(|(gi, (yi, xi))| gi * (yi - xi)).sum();
            if fy <= fx + lin + dist_sq(&y, &x) / (2.0 * step) + 1e-15 * fx.abs().max(1.0) {
                accepted = Some((y, fy));
                break;
            }
            step *= 0.5;
        }
        let Some((y, fy)) = accepted else { break };
        let moved = libm::sqrt(dist_sq(&y, &x));
        x = y;
        fx = fy;
        if moved < opts.step_tol {
            break;
        }
        step *= 2.0;
    }
    (x, fx)
}

/// Oracle settings.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Sorted argmins closer than this belong to one cluster.
    pub cluster_tol: f64,
    /// Local minima within this of the best value count as argmins.
    pub value_tol: f64,
    pub pgd: PgdOptions,
}

impl BruteForceOptions {
    pub fn new(restarts: usize, seed: u64) -> Self {
        BruteForceOptions { restarts, seed, cluster_tol: 1e-5, value_tol: 1e-6, pgd: PgdOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub min_value: f64,
    /// One representative per cluster, sorted ascending.
    pub argmins: Vec<Vec<f64>>,
}

/// Projected gradient descent from flat-Dirichlet starts.
pub fn brute_force_min(problem: &SimplexProblem<f64>, opts: &BruteForceOptions) -> Result<BruteForceResult> {
    if opts.restarts == 0 {
        return Err(Error::Precondition("restarts must be >= 1".into()));
    }
    let total = *problem.total();
    let f = |x: &[f64]| objective(x);
    let grad = |x: &[f64], g: &mut [f64]| {
        for (gi, xi) in g.iter_mut().zip(x) {
            *gi = 3.0 * xi * xi - 2.0 * xi;
        }
    };
    let mut finals: Vec<(f64, Vec<f64>)> = (0..opts.restarts)
        .map(|r| {
            let mut rng = trial_rng(opts.seed, r as u64);
            let start = dirichlet(&mut rng, problem.count(), total);
            let (mut x, fx) = minimize_on_simplex(&start, total, &f, &grad, &opts.pgd);
            x.sort_by(f64::total_cmp);
            (fx, x)
        })
        .collect();
    finals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let min_value = finals[0].0;
    let mut argmins: Vec<Vec<f64>> = Vec::new();
    for (fx, x) in &finals {
        if *fx > min_value + opts.value_tol {
            break;
        }
        if !argmins.iter().any(|a| libm::sqrt(dist_sq(a, x)) < opts.cluster_tol) {
            argmins.push(x.clone());
        }
    }
    Ok(BruteForceResult { min_value, argmins })
}

/// Outcome of [`lemma_verify`]. The oracle can only confirm the lemma, so a
/// clean run is labelled "oracle-confirmed".
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub count: usize,
    pub total: Rational,
    pub interior_value: Rational,
    pub boundary_value: Rational,
    pub boundary_zeros: usize,
    pub oracle: BruteForceResult,
    pub found_interior: bool,
    pub found_boundary: bool,
    /// Human-readable failures, each carrying its witness.
    pub failures: Vec<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn status(&self) -> &'static str {
        if self.passed() { "oracle-confirmed" } else { "failed" }
    }
}

/// Oracle lower-dominance slack.
pub const ORACLE_LOWER_TOL: f64 = 1e-8;
/// Oracle agreement slack.
pub const ORACLE_UPPER_TOL: f64 = 1e-6;

fn matches_shape(found: &[Vec<f64>], target: &[f64], tol: f64) -> bool {
    found.iter().any(|a| libm::sqrt(dist_sq(a, target)) < tol)
}

/// Checks the lemma at `C = N(N−1)/(2N−1)`: the two stated minimizers tie
/// exactly, the oracle finds nothing lower, and every oracle argmin is one
/// of the two stated points up to permutation.
pub fn lemma_verify(count: usize, opts: &BruteForceOptions) -> Result<LemmaReport> {
    if count < 3 {
        return Err(Error::InvalidDimension { n: count, min: 3 });
    }
    let total = tie_total(count);
    let exact = SimplexProblem::new(count, total.clone())?;
    let q0 = exact.interior_critical_points()?.swap_remove(0);
    let boundary = exact.boundary_minimum();
    let mut failures = Vec::new();
    if q0.value != boundary.value {
        failures.push(format!("tie broken: F(Q0) = {} but boundary value = {}", q0.value, boundary.value));
    }
    let boundary_zeros = match boundary.kind {
        CriticalKind::Boundary(k) => k,
        CriticalKind::Interior(_) => 0,
    };
    if boundary_zeros != 1 {
        failures.push(format!("boundary minimum has {boundary_zeros} zeros, expected 1"));
    }

    let oracle = brute_force_min(&SimplexProblem::new(count, total.to_f64())?, opts)?;
    let analytic = q0.value.to_f64();
    if oracle.min_value < analytic - ORACLE_LOWER_TOL {
        failures.push(format!("oracle value {} below analytic minimum {analytic} at {:?}", oracle.min_value, oracle.argmins[0]));
    }
    if oracle.min_value > analytic + ORACLE_UPPER_TOL {
        failures.push(format!("oracle value {} above analytic minimum {analytic}", oracle.min_value));
    }
    let q0_f: Vec<f64> = q0.point.iter().map(Scalar::to_f64).collect();
    let b_f: Vec<f64> = boundary.point.iter().map(Scalar::to_f64).collect();
    let found_interior = matches_shape(&oracle.argmins, &q0_f, opts.cluster_tol);
    let found_boundary = matches_shape(&oracle.argmins, &b_f, opts.cluster_tol);
    if !found_interior {
        failures.push("oracle did not find the constant minimizer".into());
    }
    if !found_boundary {
        failures.push("oracle did not find the boundary minimizer".into());
    }
    for a in &oracle.argmins {
        if libm::sqrt(dist_sq(a, &q0_f)) >= opts.cluster_tol && libm::sqrt(dist_sq(a, &b_f)) >= opts.cluster_tol {
            failures.push(format!("unexpected argmin {a:?}"));
        }
    }
    Ok(LemmaReport {
        count,
        total,
        interior_value: q0.value,
        boundary_value: boundary.value,
        boundary_zeros,
        oracle,
        found_interior,
        found_boundary,
        failures,
    })
}
