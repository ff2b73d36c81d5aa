use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::Rng;
use rigidity_core::random::{sorted_uniform, trial_rng, uniform};
use rigidity_core::scalar::rat;
use rigidity_core::spectra::{cone_check, lambda1_bound, weighted_sum_bound, ConeCondition, Spectrum};

/// Minimal `λ_1` subject to `λ_1 ≤ … ≤ λ_N`, `Σλ = N` and
/// `λ_1 + … + λ_k ≥ −kθ`.
fn lp_min_lambda1(len: usize, k: usize, theta: f64) -> f64 {
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> =
        (0..len).map(|i| p.add_var(if i == 0 { 1.0 } else { 0.0 }, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    for w in vars.windows(2) {
        p.add_constraint(&[(w[1], 1.0), (w[0], -1.0)], ComparisonOp::Ge, 0.0);
    }
    let all: Vec<_> = vars.iter().map(|&v| (v, 1.0)).collect();
    p.add_constraint(all.as_slice(), ComparisonOp::Eq, len as f64);
    let head: Vec<_> = vars[..k].iter().map(|&v| (v, 1.0)).collect();
    p.add_constraint(head.as_slice(), ComparisonOp::Ge, -(k as f64) * theta);
    p.solve().unwrap().objective()
}

#[test]
fn lambda1_bound_matches_lp_oracle() {
    for (s, len) in [9usize, 14, 20].into_iter().enumerate() {
        for t in 0..20u64 {
            let mut rng = trial_rng(40 + s as u64, t);
            let k = rng.random_range(1..len);
            let theta = uniform(&mut rng, 0.0, 3.0);
            let d = lambda1_bound(len, &ConeCondition::new(k, theta)).unwrap();
            let lp = lp_min_lambda1(len, k, theta);
            assert!((lp + d).abs() <= 1e-10 * d.abs().max(1.0), "N={len} k={k} θ={theta}: {lp} vs {}", -d);
        }
    }
}

#[test]
fn lambda1_bound_examples() {
    assert_eq!(lambda1_bound(9, &ConeCondition::new(2, rat(0, 1))).unwrap(), rat(9, 7));
    assert_eq!(lambda1_bound(14, &ConeCondition::new(3, rat(1, 54))).unwrap(), rat(47, 18));
    assert!((lp_min_lambda1(9, 2, 0.0) + 9.0 / 7.0).abs() < 1e-10);
}

#[test]
fn proposition_on_10000_feasible_trials() {
    let m = 1.0;
    let mut checked = 0;
    let mut t = 0u64;
    while checked < 10_000 {
        let mut rng = trial_rng(8, t);
        t += 1;
        let len = [9usize, 14, 20][rng.random_range(0..3)];
        let k = rng.random_range(1..=3);
        let theta = uniform(&mut rng, 0.0, 1.5);
        let spec = Spectrum::new(sorted_uniform(&mut rng, len, -1.0, 3.0)).unwrap();
        let cond = ConeCondition::new(k, theta);
        if *spec.mean() <= 0.0 || !cone_check(&spec, &cond).unwrap().holds {
            continue;
        }
        let weights: Vec<f64> = (0..len).map(|_| uniform(&mut rng, 0.0, m)).collect();
        if weights.iter().sum::<f64>() < k as f64 * m {
            continue;
        }
        let r = weighted_sum_bound(&spec, &weights, &m, &cond).unwrap();
        assert!(r.holds, "trial {t}: {r:?}");
        assert!(r.weighted_sum >= r.chain - 1e-9 && r.chain >= r.bound - 1e-9, "trial {t}: {r:?}");
        checked += 1;
    }
    assert!(t < 200_000);
}

#[test]
fn proposition_equality_case() {
    for (theta, l3) in [(rat(1, 2), rat(4, 1)), (rat(3, 7), rat(27, 7))] {
        let m = rat(5, 2);
        let spec = Spectrum::new(vec![-theta.clone(), -theta.clone(), l3]).unwrap();
        assert_eq!(*spec.mean(), rat(1, 1));
        let w = vec![m.clone(), m.clone(), rat(0, 1)];
        let r = weighted_sum_bound(&spec, &w, &m, &ConeCondition::new(1, theta.clone())).unwrap();
        assert_eq!(r.weighted_sum, r.bound);
        assert_eq!(r.bound, -(rat(2, 1) * m * theta));
        assert!(r.holds);
    }
}
