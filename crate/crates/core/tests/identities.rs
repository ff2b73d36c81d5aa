use rigidity_core::random::{random_einstein, random_orthogonal, random_rational_tensor, random_weyl, trial_rng};
use rigidity_core::scalar::rat;
use rigidity_core::spectra::second_kind_spectrum;
use rigidity_core::tensor::{
    assemble_einstein, build_traceless_basis, check_curvature_identities, max_unit_action_norm, project_to_weyl,
    s02_action_norm_sum, second_kind_matrix, second_kind_square_trace, second_kind_trace, EinsteinData,
    TracelessBasis,
};
use rigidity_core::Rational;

const DIMS: std::ops::RangeInclusive<usize> = 4..=8;

fn s_factor(n: usize) -> f64 {
    2.0 * (n * n + n - 8) as f64 / n as f64
}

#[test]
fn action_norm_sum_identity_and_basis_independence() {
    for n in DIMS {
        let basis = build_traceless_basis(n).unwrap();
        let len = basis.len();
        for t in 0..100u64 {
            let mut rng = trial_rng(100 + n as u64, t);
            let w = random_weyl(&mut rng, n);
            let norm = w.norm_sq();
            let sum = s02_action_norm_sum(w.tensor(), &basis).unwrap();
            assert!((sum - s_factor(n) * norm).abs() <= 1e-9 * norm, "n={n} t={t}");
            let rotated = basis.rotated(&random_orthogonal(&mut rng, len)).unwrap();
            assert!(rotated.is_orthonormal(1e-12));
            let other = s02_action_norm_sum(w.tensor(), &rotated).unwrap();
            assert!((other - sum).abs() <= 1e-9 * sum.abs(), "n={n} t={t}");
        }
    }
}

#[test]
fn action_norm_sum_identity_exact() {
    for n in 4..=6usize {
        let basis = TracelessBasis::<Rational>::orthogonal(n).unwrap();
        let factor = rat(2 * (n * n + n - 8) as i64, n as i64);
        for t in 0..3u64 {
            let mut rng = trial_rng(7, t);
            let w = project_to_weyl(&random_rational_tensor(&mut rng, n, 3)).unwrap();
            check_curvature_identities(w.tensor()).unwrap();
            assert!(w.is_trace_free());
            let sum = s02_action_norm_sum(w.tensor(), &basis).unwrap();
            assert_eq!(sum, factor.clone() * w.norm_sq(), "n={n}");
        }
    }
}

#[test]
fn max_action_norm_below_bound() {
    for n in DIMS {
        let basis = build_traceless_basis(n).unwrap();
        for t in 0..20u64 {
            let mut rng = trial_rng(300 + n as u64, t);
            let w = random_weyl(&mut rng, n);
            let bound = (8 * n - 16) as f64 / n as f64 * w.norm_sq();
            let m = max_unit_action_norm(w.tensor(), &basis, 50, t).unwrap();
            assert!(m <= bound + 1e-9, "n={n}: {m} > {bound}");
            assert!(m > 0.0);
        }
    }
}

#[test]
fn einstein_float_identities() {
    for n in DIMS {
        let nn = (n - 1) * (n + 2) / 2;
        for t in 0..100u64 {
            let mut rng = trial_rng(500 + n as u64, t);
            let s = (t as f64 - 50.0) / 7.0;
            let data = random_einstein(&mut rng, n, 0.5 + (t % 5) as f64, s);
            let r = assemble_einstein(&data);
            check_curvature_identities(r.tensor()).unwrap();
            let spec = second_kind_spectrum(&r).unwrap();
            let (sum, sum_sq): (f64, f64) = spec.values().iter().fold((0.0, 0.0), |(a, b), l| (a + l, b + l * l));
            let trace_target = (n + 2) as f64 * s / (2 * n) as f64;
            assert!((sum - trace_target).abs() <= 1e-10 * trace_target.abs().max(sum_sq.sqrt()), "n={n} t={t}");
            let mean = sum / nn as f64;
            let w2 = data.weyl().norm_sq();
            let rhs = 4.0 / 3.0 * sum_sq - 4.0 * nn as f64 / 3.0 * mean * mean;
            assert!((w2 - rhs).abs() <= 1e-9 * w2, "n={n} t={t}: {w2} vs {rhs}");
        }
    }
}

#[test]
fn einstein_exact_identities() {
    for n in 4..=6usize {
        let basis = TracelessBasis::<Rational>::orthogonal(n).unwrap();
        let nn = rat(((n - 1) * (n + 2) / 2) as i64, 1);
        for t in 0..3u64 {
            let mut rng = trial_rng(11, t);
            let w = project_to_weyl(&random_rational_tensor(&mut rng, n, 2)).unwrap();
            let s = rat(t as i64 * 5 - 3, 2);
            let data = EinsteinData::new(s.clone(), w.clone()).unwrap();
            let r = assemble_einstein(&data);
            check_curvature_identities(r.tensor()).unwrap();
            assert_eq!(r.scalar_curvature(), s);
            let m = second_kind_matrix(&r, &basis).unwrap();
            assert_eq!(second_kind_trace(&m, &basis), rat((n + 2) as i64, 2 * n as i64) * s.clone());
            let mean = data.mean_eigenvalue();
            let sq = second_kind_square_trace(&m, &basis);
            assert_eq!(w.norm_sq(), rat(4, 3) * sq - rat(4, 3) * nn.clone() * mean.clone() * mean);
            // homogeneity
            let c = rat(-7, 3);
            let scaled = second_kind_matrix(&r.scale(&c), &basis).unwrap();
            assert_eq!(scaled, m.scale(&c));
        }
    }
}

#[test]
fn float_symmetries_hold_to_tolerance() {
    for n in DIMS {
        let mut rng = trial_rng(1, n as u64);
        let w = random_weyl(&mut rng, n);
        assert!(w.to_f64().tensor().max_abs() > 0.0);
        let r = assemble_einstein(&EinsteinData::new(3.0, w).unwrap());
        let t = r.tensor();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = t[[i, j, k, l]];
                        assert!((v + t[[j, i, k, l]]).abs() <= 1e-12);
                        assert!((v - t[[k, l, i, j]]).abs() <= 1e-12);
                        assert!((v + t[[i, k, l, j]] + t[[i, l, j, k]]).abs() <= 1e-12);
                    }
                }
            }
        }
        assert!(r.ricci().max_asymmetry() <= 1e-12);
        let ric = r.ricci();
        for a in 0..n {
            for b in 0..n {
                let target = if a == b { 3.0 / n as f64 } else { 0.0 };
                assert!((ric.get(a, b) - target).abs() <= 1e-12);
            }
        }
    }
}
