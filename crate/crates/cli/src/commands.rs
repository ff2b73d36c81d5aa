//! Command implementations. Each returns a [`Report`]; input problems are
//! returned as [`CliError`].

use std::ops::RangeInclusive;

use rigidity_core::bochner::traceless_dim;
use rigidity_core::optimize::{brute_force_min, BruteForceOptions, CriticalKind, SimplexProblem, ORACLE_LOWER_TOL, ORACLE_UPPER_TOL};
use rigidity_core::spectra::{second_kind_spectrum, Spectrum};
use rigidity_core::tensor::{kulkarni_nomizu_gg, second_kind_matrix, second_kind_square_trace, second_kind_trace, TracelessBasis};
use rigidity_core::theorems::{build_table, verdict, Admissibility, Verdict};
use rigidity_core::{Rational, Scalar};

use crate::file::CurvatureFile;
use crate::report::Report;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

pub(crate) fn join<T: std::fmt::Display>(values: &[T]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub(crate) fn rel_err(a: f64, b: f64, scale: f64) -> f64 {
    if scale == 0.0 { (a - b).abs() } else { (a - b).abs() / scale }
}

/// Relative tolerance of the trace identity.
pub const TRACE_TOL: f64 = 1e-10;
/// Relative tolerance of the Weyl norm identity.
pub const WEYL_TOL: f64 = 1e-9;

/// Spectrum of `R̊` for a curvature file with the trace and Weyl-norm checks.
pub fn spectrum(file: &CurvatureFile, mode: Mode) -> Result<Report, CliError> {
    let n = file.n;
    if n < 2 {
        return Err(CliError::Input("n must be >= 2".into()));
    }
    let nn = traceless_dim(n);
    let r = file.tensor().map_err(|e| CliError::Input(e.to_string()))?;
    let mut rep = Report::new("spectrum");
    rep.fact("mode", mode);
    rep.fact("n", n);
    rep.fact("N", nn);
    let spec = second_kind_spectrum(&r)?;
    rep.heading("Spectrum of the curvature operator of the second kind");
    rep.fact("eigenvalues", join(spec.values()));
    match mode {
        Mode::Exact => {
            let basis = TracelessBasis::<Rational>::orthogonal(n)?;
            let m = second_kind_matrix(&r, &basis)?;
            let s = r.scalar_curvature();
            let trace = second_kind_trace(&m, &basis);
            let mean = trace.clone() / Rational::from_usize(nn);
            rep.fact("mean", &mean);
            rep.fact("s", &s);
            rep.fact("trace", &trace);
            let target = Rational::from_usize(n + 2) * s.clone() / Rational::from_usize(2 * n);
            rep.check("trace_identity", trace == target, format!("tr = {trace}, (n+2)s/(2n) = {target} (exact)"));
            let einstein = r.ricci() == rigidity_core::tensor::SymMatrix::identity(n).scale(&(s.clone() / Rational::from_usize(n)));
            rep.fact("einstein", einstein);
            if einstein && n >= 3 {
                let gg = kulkarni_nomizu_gg::<Rational>(n)?;
                let w = r.add(&gg.scale(&-(s.clone() / Rational::from_usize(n * (n - 1)))))?;
                let w2 = w.norm_sq();
                let sq = second_kind_square_trace(&m, &basis);
                let rhs = Rational::ratio(4, 3) * sq - Rational::ratio(4, 3) * Rational::from_usize(nn) * mean.clone() * mean;
                rep.fact("weyl_norm_sq", &w2);
                rep.check("weyl_norm_identity", w2 == rhs, format!("|W|^2 = {w2}, (4/3)sum l^2 - (4N/3)mean^2 = {rhs} (exact)"));
            } else {
                rep.note("weyl_norm_identity", "skipped: the tensor is not Einstein");
            }
        }
        Mode::Float => {
            let rf = r.to_f64();
            let s = rf.scalar_curvature();
            let sum: f64 = spec.values().iter().sum();
            let sum_sq: f64 = spec.values().iter().map(|l| l * l).sum();
            let mean = *spec.mean();
            rep.fact("mean", mean);
            rep.fact("s", s);
            rep.fact("trace", sum);
            let target = (n + 2) as f64 * s / (2 * n) as f64;
            let err = rel_err(sum, target, target.abs().max(sum_sq.sqrt()));
            rep.check("trace_identity", err <= TRACE_TOL, format!("relative error {err:.3e}"));
            let ric = rf.ricci();
            let scale = rf.tensor().max_abs().max(1.0);
            let einstein = (0..n).all(|a| {
                (0..n).all(|b| {
                    let target = if a == b { s / n as f64 } else { 0.0 };
                    (ric.get(a, b) - target).abs() <= 1e-12 * scale
                })
            });
            rep.fact("einstein", einstein);
            if einstein && n >= 3 {
                let gg = kulkarni_nomizu_gg::<f64>(n)?;
                let w = rf.add(&gg.scale(&(-s / (n * (n - 1)) as f64)))?;
                let w2 = w.norm_sq();
                let rhs = 4.0 / 3.0 * sum_sq - 4.0 * nn as f64 / 3.0 * mean * mean;
                let err = rel_err(w2, rhs, w2 + 4.0 / 3.0 * sum_sq);
                rep.fact("weyl_norm_sq", w2);
                rep.check("weyl_norm_identity", err <= WEYL_TOL, format!("|W|^2 = {w2}, rhs = {rhs}, relative error {err:.3e}"));
            } else {
                rep.note("weyl_norm_identity", "skipped: the tensor is not Einstein");
            }
        }
    }
    Ok(rep)
}

fn statement(k: usize, sum_form: &Rational) -> String {
    let lhs = (1..=k).map(|i| format!("l{i}")).collect::<Vec<_>>().join("+");
    format!("{lhs}>=-{sum_form}*mean")
}

/// Classification table with exact constants. Fails iff some certificate has
/// a nonzero residue.
pub fn theta(dims: RangeInclusive<usize>) -> Result<Report, CliError> {
    if *dims.start() < 4 {
        return Err(CliError::Input("dimensions must be >= 4".into()));
    }
    let mut rep = Report::new("theta");
    rep.fact("mode", Mode::Exact);
    rep.fact("dims", format!("{}..{}", dims.start(), dims.end()));
    let rows = build_table(dims)?;
    rep.heading("Rigidity constants theta(n, k)");
    let mut table = Vec::new();
    let mut bad = Vec::new();
    for row in &rows {
        let c = &row.certificate;
        if !c.is_valid() {
            bad.push(format!("(n={}, k={}): residues {}, {}, {}", row.n, row.k, c.matching_residue, c.residue_point1, c.residue_point2));
        }
        let status = match &row.admissibility {
            Admissibility::Admissible => "admissible".to_string(),
            Admissibility::NegativeTheta(_) => "inadmissible:negative-theta".to_string(),
        };
        table.push(vec![
            row.n.to_string(),
            row.k.to_string(),
            row.source.to_string(),
            row.theorem.to_string(),
            row.theta.to_string(),
            row.sum_form.to_string(),
            c.d.to_string(),
            status,
            row.li_applicable.to_string(),
            row.k_bound.to_string(),
            c.residue_point2.to_string(),
            if row.is_admissible() { statement(row.k, &row.sum_form) } else { "-".into() },
        ]);
    }
    rep.table(
        "row",
        &["n", "k", "source", "theorem", "theta", "sum_form", "D", "status", "li_applicable", "k_bound", "residue_point2", "statement"],
        table,
    );
    for row in &rows {
        if let Some(note) = row.note {
            rep.note(format!("n{}k{}", row.n, row.k), note);
        }
    }
    rep.check("certificate_residues", bad.is_empty(), if bad.is_empty() { format!("{} certificates, all residues exactly 0", rows.len()) } else { bad.join("; ") });
    Ok(rep)
}

/// Analytic and oracle minima of `Σλ³ − Σλ²` on `{λ ≥ 0, Σλ = C}`.
pub fn minimize(count: usize, total: &Rational, restarts: usize, seed: u64) -> Result<Report, CliError> {
    if count < 3 {
        return Err(CliError::Input(format!("N must be >= 3, got {count}")));
    }
    if restarts == 0 {
        return Err(CliError::Input("--restarts must be >= 1".into()));
    }
    let exact = SimplexProblem::new(count, total.clone()).map_err(|e| CliError::Input(e.to_string()))?;
    let interior = exact.interior_critical_points().map_err(|e| CliError::Input(e.to_string()))?;
    let mut rep = Report::new("minimize");
    rep.fact("seed", seed);
    rep.fact("N", count);
    rep.fact("C", total);
    rep.fact("restarts", restarts);
    rep.heading("Interior critical points Q_k");
    let rows = interior
        .iter()
        .map(|q| {
            let k = match q.kind {
                CriticalKind::Interior(k) | CriticalKind::Boundary(k) => k,
            };
            vec![
                k.to_string(),
                q.value.to_string(),
                q.value.to_f64().to_string(),
                q.multiplier.as_ref().map(|m| m.to_string()).unwrap_or_default(),
                q.feasible.to_string(),
                (q.closed_form_value.as_ref() == Some(&q.value)).to_string(),
            ]
        })
        .collect();
    rep.table("interior", &["k", "value", "value_f64", "mu", "feasible", "closed_form_agrees"], rows);
    let closed_ok = interior.iter().all(|q| q.closed_form_value.as_ref() == Some(&q.value));
    rep.check("closed_form", closed_ok, "direct F(Q_k) equals the closed form for every k");
    let boundary = exact.boundary_minimum();
    let zeros = match boundary.kind {
        CriticalKind::Boundary(k) | CriticalKind::Interior(k) => k,
    };
    rep.heading("Boundary minimum");
    rep.fact("boundary.zeros", zeros);
    rep.fact("boundary.value", &boundary.value);
    rep.fact("boundary.point", join(&boundary.point));
    let q0 = &interior[0].value;
    let analytic = if boundary.value < *q0 { boundary.value.clone() } else { q0.clone() };
    rep.fact("interior.q0_value", q0);
    rep.fact("analytic.min", &analytic);
    rep.fact("analytic.tie", boundary.value == *q0);

    rep.heading("Projected-gradient oracle");
    let problem = SimplexProblem::new(count, total.to_f64())?;
    let oracle = brute_force_min(&problem, &BruteForceOptions::new(restarts, seed))?;
    rep.fact("oracle.min", oracle.min_value);
    rep.fact("oracle.argmin_count", oracle.argmins.len());
    for (i, a) in oracle.argmins.iter().enumerate() {
        let pretty: Vec<String> = a.iter().map(|v| format!("{v:.9}")).collect();
        rep.fact(format!("oracle.argmin.{i}"), pretty.join(","));
    }
    let a = analytic.to_f64();
    let agrees = oracle.min_value >= a - ORACLE_LOWER_TOL && oracle.min_value <= a + ORACLE_UPPER_TOL;
    rep.check("oracle_agrees", agrees, format!("oracle {} vs analytic {a}", oracle.min_value));
    rep.note("status", if agrees { "oracle-confirmed (sampling confirms, it does not prove)" } else { "oracle disagrees" });
    Ok(rep)
}

fn verdict_report<T: Scalar>(rep: &mut Report, v: &Verdict<T>) {
    rep.fact("mean", &v.mean);
    let rows = v
        .checks
        .iter()
        .map(|c| vec![c.k.to_string(), c.theta.to_string(), c.holds.to_string(), c.slack.to_string()])
        .collect();
    rep.table("cone", &["k", "theta", "holds", "slack"], rows);
    rep.fact("verdict", v.message());
    rep.note("scope", "hypothesis check only; no topology is computed");
}

/// Verdict for the spectrum of a curvature file (eigenvalues in `f64`).
pub fn classify_file(file: &CurvatureFile) -> Result<Report, CliError> {
    if file.n < 4 {
        return Err(CliError::Input("classification needs n >= 4".into()));
    }
    let r = file.tensor().map_err(|e| CliError::Input(e.to_string()))?;
    let spec = second_kind_spectrum(&r)?;
    let mut rep = Report::new("classify");
    rep.fact("mode", Mode::Float);
    rep.fact("n", file.n);
    rep.fact("eigenvalues", join(spec.values()));
    let v = verdict(&spec, file.n)?;
    verdict_report(&mut rep, &v);
    Ok(rep)
}

/// Verdict for an explicit spectrum.
pub fn classify_spectrum(values: &[Rational], n: usize, mode: Mode) -> Result<Report, CliError> {
    if n < 4 {
        return Err(CliError::Input("classification needs n >= 4".into()));
    }
    let nn = traceless_dim(n);
    if values.len() != nn {
        return Err(CliError::Input(format!("spectrum has {} values, n = {n} needs N = {nn}", values.len())));
    }
    let mut rep = Report::new("classify");
    rep.fact("mode", mode);
    rep.fact("n", n);
    match mode {
        Mode::Exact => {
            let spec = Spectrum::new(values.to_vec())?;
            rep.fact("eigenvalues", join(spec.values()));
            verdict_report(&mut rep, &verdict(&spec, n)?);
        }
        Mode::Float => {
            let spec = Spectrum::new(values.iter().map(Scalar::to_f64).collect())?;
            rep.fact("eigenvalues", join(spec.values()));
            verdict_report(&mut rep, &verdict(&spec, n)?);
        }
    }
    Ok(rep)
}
