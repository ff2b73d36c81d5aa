use alloc::vec::Vec;

use super::{CurvatureTensor, SymMatrix, Tensor, TracelessBasis};
use crate::error::{Error, Result};
use crate::random::{standard_normal, trial_rng};
use crate::scalar::Scalar;

/// Matrix of the second-kind form in `basis`:
/// `M[a][b] = Σ_ijkl R_ijkl Sᵃ_jk Sᵇ_il`.
///
/// For the orthonormal basis this is the matrix of `R̊`. For an unnormalized
/// orthogonal basis it is the Gram form, and the operator is `ν⁻¹ M` with
/// `ν = basis.norms_sq()`; [`second_kind_trace`] and
/// [`second_kind_square_trace`] account for that.
pub fn second_kind_matrix<T: Scalar>(
    r: &CurvatureTensor<T>,
    basis: &TracelessBasis<T>,
) -> Result<SymMatrix<T>> {
    if basis.n() != r.n() {
        return Err(Error::DimensionMismatch { expected: r.n(), found: basis.n() });
    }
    let t = r.tensor();
    Ok(SymMatrix::from_upper(basis.len(), |a, b| {
        let mut acc = T::zero();
        for (j, k, x) in basis.sparse(a) {
            for (i, l, y) in basis.sparse(b) {
                let v = &t[[*i, *j, *k, *l]];
                if !v.is_zero() {
                    acc = acc + v.clone() * x.clone() * y.clone();
                }
            }
        }
        acc
    }))
}

/// `tr R̊ = Σ_a M[a][a] / ν_a`.
pub fn second_kind_trace<T: Scalar>(m: &SymMatrix<T>, basis: &TracelessBasis<T>) -> T {
    basis
        .norms_sq()
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (a, nu)| acc + m.get(a, a).clone() / nu.clone())
}

/// `Σ λ_i² = tr (R̊²) = Σ_ab M[a][b]² / (ν_a ν_b)`.
pub fn second_kind_square_trace<T: Scalar>(m: &SymMatrix<T>, basis: &TracelessBasis<T>) -> T {
    let nu = basis.norms_sq();
    let mut acc = T::zero();
    for a in 0..basis.len() {
        for b in 0..basis.len() {
            let v = m.get(a, b);
            if !v.is_zero() {
                acc = acc + v.clone() * v.clone() / (nu[a].clone() * nu[b].clone());
            }
        }
    }
    acc
}

/// Matrix of the first-kind operator on `Λ²` in the basis `e_i∧e_j`, `i < j`
/// lexicographic: `M[(ij)][(kl)] = R_ijkl`.
///
/// Normalization: `R̂(e_i∧e_j) = ½ Σ_kl R_ijkl e_k∧e_l = Σ_{k<l} R_ijkl e_k∧e_l`,
/// with `{e_i∧e_j}_{i<j}` orthonormal. The unit sphere maps to the identity.
pub fn first_kind_matrix<T: Scalar>(r: &CurvatureTensor<T>) -> SymMatrix<T> {
    let n = r.n();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let t = r.tensor();
    SymMatrix::from_upper(pairs.len(), |p, q| {
        let (i, j) = pairs[p];
        let (k, l) = pairs[q];
        t[[i, j, k, l]].clone()
    })
}

fn act_sparse<T: Scalar>(entries: &[(usize, usize, T)], t: &Tensor<T>) -> Tensor<T> {
    let n = t.n();
    let rank = t.rank();
    let src = t.as_slice();
    let mut out = alloc::vec![T::zero(); src.len()];
    for slot in 0..rank {
        let stride = n.pow((rank - 1 - slot) as u32);
        let block = stride * n;
        for (a, p, v) in entries {
            for hi in (0..src.len()).step_by(block) {
                for o in hi..hi + stride {
                    let x = &src[o + p * stride];
                    if !x.is_zero() {
                        out[o + a * stride] = out[o + a * stride].clone() + v.clone() * x.clone();
                    }
                }
            }
        }
    }
    Tensor::from_vec(n, rank, out).expect("same length")
}

/// Derivation action of a symmetric 2-tensor on a `k`-index array:
/// `(S T)(X_1, …, X_k) = Σ_i T(X_1, …, S X_i, …, X_k)`, i.e.
/// `(S T)_{a_1…a_k} = Σ_i Σ_p S_{a_i p} T_{a_1…p…a_k}`.
pub fn act<T: Scalar>(s: &SymMatrix<T>, t: &Tensor<T>) -> Result<Tensor<T>> {
    if s.n() != t.n() {
        return Err(Error::DimensionMismatch { expected: t.n(), found: s.n() });
    }
    Ok(act_sparse(&s.nonzeros(), t))
}

/// `Σ_a ‖Sᵃ T‖² / ν_a`, basis independent.
pub fn s02_action_norm_sum<T: Scalar>(t: &Tensor<T>, basis: &TracelessBasis<T>) -> Result<T> {
    if basis.n() != t.n() {
        return Err(Error::DimensionMismatch { expected: t.n(), found: basis.n() });
    }
    Ok((0..basis.len()).fold(T::zero(), |acc, a| {
        acc + act_sparse(basis.sparse(a), t).norm_sq() / basis.norms_sq()[a].clone()
    }))
}

/// Lower estimate of `max ‖S W‖²` over unit traceless `S`.
///
/// `‖S W‖²` is the quadratic form `xᵀ G x` in the coordinates of `S`, with
/// `G_ab = ⟨Ŝᵃ W, Ŝᵇ W⟩` for the normalized basis `Ŝ`. Each trial draws a
/// random unit `x` (generator derived from `(seed, trial)`) and climbs with
/// power steps `x ← Gx/‖Gx‖`, which never decrease the Rayleigh quotient since
/// `G` is positive semidefinite. The result never exceeds the true maximum.
pub fn max_unit_action_norm(
    w: &Tensor<f64>,
    basis: &TracelessBasis<f64>,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    const ASCENT_STEPS: usize = 32;
    if trials == 0 {
        return Err(Error::Precondition("trials must be >= 1".into()));
    }
    if basis.n() != w.n() {
        return Err(Error::DimensionMismatch { expected: w.n(), found: basis.n() });
    }
    let vectors: Vec<Tensor<f64>> = (0..basis.len())
        .map(|a| act_sparse(basis.sparse(a), w).scale(&(1.0 / libm::sqrt(basis.norms_sq()[a]))))
        .collect();
    let gram = SymMatrix::from_upper(basis.len(), |a, b| vectors[a].inner(&vectors[b]));

    let rayleigh = |x: &[f64]| -> f64 {
        let gx = gram.mul_vec(x);
        x.iter().zip(&gx).map(|(a, b)| a * b).sum()
    };
    let normalize = |x: &mut [f64]| {
        let norm = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
        if norm > 0.0 {
            x.iter_mut().for_each(|v| *v /= norm);
        }
        norm
    };

    let mut best = 0.0f64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let mut x: Vec<f64> = (0..basis.len()).map(|_| standard_normal(&mut rng)).collect();
        normalize(&mut x);
        best = best.max(rayleigh(&x));
        for _ in 0..ASCENT_STEPS {
            let mut gx = gram.mul_vec(&x);
            if normalize(&mut gx) == 0.0 {
                break;
            }
            x = gx;
            best = best.max(rayleigh(&x));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_rational_tensor, random_tensor, random_weyl, trial_rng};
    use crate::scalar::{rat, Rational};
    use crate::tensor::{
        assemble_einstein, build_traceless_basis, kulkarni_nomizu_gg, project_to_weyl, EinsteinData,
    };

    fn brute_second_kind(r: &Tensor<f64>, basis: &TracelessBasis<f64>) -> Vec<Vec<f64>> {
        let n = r.n();
        let els = basis.elements();
        (0..els.len())
            .map(|a| {
                (0..els.len())
                    .map(|b| {
                        let mut acc = 0.0;
                        for i in 0..n {
                            for j in 0..n {
                                for k in 0..n {
                                    for l in 0..n {
                                        acc += r[[i, j, k, l]] * els[a].get(j, k) * els[b].get(i, l);
                                    }
                                }
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    fn brute_act(s: &SymMatrix<f64>, t: &Tensor<f64>) -> Tensor<f64> {
        let n = t.n();
        Tensor::from_fn(n, 4, |x| {
            let mut acc = 0.0;
            for slot in 0..4 {
                for p in 0..n {
                    let mut y = [x[0], x[1], x[2], x[3]];
                    y[slot] = p;
                    acc += s.get(x[slot], p) * t[y];
                }
            }
            acc
        })
    }

    #[test]
    fn sphere_gives_identity_n4() {
        let r = kulkarni_nomizu_gg::<f64>(4).unwrap();
        let m = second_kind_matrix(&r, &build_traceless_basis(4).unwrap()).unwrap();
        assert_eq!(m.n(), 9);
        for a in 0..9 {
            for b in 0..9 {
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((m.get(a, b) - target).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_tensor_gives_zero() {
        let r = CurvatureTensor::<f64>::zero(5);
        let m = second_kind_matrix(&r, &build_traceless_basis(5).unwrap()).unwrap();
        assert_eq!(m, SymMatrix::zeros(14));
        assert_eq!(first_kind_matrix(&r), SymMatrix::zeros(10));
    }

    #[test]
    fn matches_brute_force_and_is_symmetric() {
        let mut rng = trial_rng(5, 0);
        let w = random_weyl(&mut rng, 5);
        let r = assemble_einstein(&EinsteinData::new(3.0, w).unwrap());
        let basis = build_traceless_basis(5).unwrap();
        let m = second_kind_matrix(&r, &basis).unwrap();
        let brute = brute_second_kind(r.tensor(), &basis);
        for a in 0..14 {
            for b in 0..14 {
                assert!((m.get(a, b) - brute[a][b]).abs() < 1e-12);
                assert!((brute[a][b] - brute[b][a]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn trace_identity_exact_n5() {
        let mut rng = trial_rng(11, 0);
        let w = project_to_weyl(&random_rational_tensor(&mut rng, 5, 4)).unwrap();
        let s = rat(37, 3);
        let r = assemble_einstein(&EinsteinData::new(s.clone(), w).unwrap());
        let basis = TracelessBasis::<Rational>::orthogonal(5).unwrap();
        let m = second_kind_matrix(&r, &basis).unwrap();
        assert_eq!(second_kind_trace(&m, &basis), s * rat(7, 10));
    }

    #[test]
    fn exact_and_float_backends_agree() {
        let mut rng = trial_rng(12, 0);
        let w = project_to_weyl(&random_rational_tensor(&mut rng, 4, 4)).unwrap();
        let r = assemble_einstein(&EinsteinData::new(rat(5, 1), w).unwrap());
        let exact_basis = TracelessBasis::<Rational>::orthogonal(4).unwrap();
        let m = second_kind_matrix(&r, &exact_basis).unwrap();
        let fm = second_kind_matrix(&r.to_f64(), &build_traceless_basis(4).unwrap()).unwrap();
        let sq = second_kind_square_trace(&m, &exact_basis).to_f64();
        let fsq: f64 = fm.frobenius(&fm);
        assert!((sq - fsq).abs() < 1e-10 * fsq);
        assert!((second_kind_trace(&m, &exact_basis).to_f64() - fm.trace()).abs() < 1e-12);
    }

    #[test]
    fn first_kind_sphere_n3_is_identity() {
        let r = kulkarni_nomizu_gg::<Rational>(3).unwrap();
        assert_eq!(first_kind_matrix(&r), SymMatrix::identity(3));
    }

    #[test]
    fn first_kind_direct_evaluation() {
        // R̂(e_i∧e_j) = ½ Σ_kl R_ijkl e_k∧e_l, read off coefficient of e_k∧e_l (k<l)
        let mut rng = trial_rng(13, 0);
        let w = random_weyl(&mut rng, 4);
        let m = first_kind_matrix(&w);
        let t = w.tensor();
        let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
        for (p, &(i, j)) in pairs.iter().enumerate() {
            for (q, &(k, l)) in pairs.iter().enumerate() {
                // e_l∧e_k = −e_k∧e_l
                let coeff = 0.5 * (t[[i, j, k, l]] - t[[i, j, l, k]]);
                assert!((m.get(p, q) - coeff).abs() < 1e-15);
            }
        }
        assert_eq!(m.max_asymmetry(), 0.0);
    }

    #[test]
    fn act_identity_scales_by_rank() {
        let mut rng = trial_rng(14, 0);
        let t = random_tensor(&mut rng, 3, 4);
        let out = act(&SymMatrix::identity(3), &t).unwrap();
        assert_eq!(out, t.scale(&4.0));
        let t3 = random_tensor(&mut rng, 3, 3);
        assert_eq!(act(&SymMatrix::identity(3), &t3).unwrap(), t3.scale(&3.0));
    }

    #[test]
    fn act_on_zero_is_zero() {
        let s = SymMatrix::from_upper(4, |i, j| (i + 2 * j) as f64);
        let z = Tensor::<f64>::zeros(4, 4);
        assert_eq!(act(&s, &z).unwrap(), z);
    }

    #[test]
    fn act_matches_brute_force() {
        let s = SymMatrix::<f64>::diagonal(&[1.0, -1.0, 0.0, 0.0]);
        let gg = kulkarni_nomizu_gg::<f64>(4).unwrap();
        assert_eq!(act(&s, gg.tensor()).unwrap(), brute_act(&s, gg.tensor()));
        let mut rng = trial_rng(15, 0);
        let t = random_tensor(&mut rng, 4, 4);
        let dense = SymMatrix::from_upper(4, |i, j| 0.3 * i as f64 - 0.7 * j as f64 + 0.1);
        let a = act(&dense, &t).unwrap();
        let b = brute_act(&dense, &t);
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn act_dimension_mismatch() {
        let err = act(&SymMatrix::<f64>::identity(3), &Tensor::zeros(4, 4)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 4, found: 3 });
    }

    #[test]
    fn action_norm_sum_exact_identity() {
        // Σ‖SⁱW‖² = (2(n²+n−8)/n)|W|² exactly
        let mut rng = trial_rng(16, 0);
        for n in [4usize, 5] {
            let w = project_to_weyl(&random_rational_tensor(&mut rng, n, 3)).unwrap();
            let basis = TracelessBasis::<Rational>::orthogonal(n).unwrap();
            let lhs = s02_action_norm_sum(w.tensor(), &basis).unwrap();
            let n = n as i64;
            assert_eq!(lhs, w.norm_sq() * rat(2 * (n * n + n - 8), n));
        }
    }

    #[test]
    fn action_norm_sum_zero_and_float() {
        let basis = build_traceless_basis(4).unwrap();
        assert_eq!(s02_action_norm_sum(&Tensor::zeros(4, 4), &basis).unwrap(), 0.0);
        let mut rng = trial_rng(17, 0);
        let w = random_weyl(&mut rng, 4);
        let lhs = s02_action_norm_sum(w.tensor(), &basis).unwrap();
        assert!((lhs - 6.0 * w.norm_sq()).abs() <= 1e-9 * w.norm_sq());
    }

    #[test]
    fn max_action_norm_below_bound() {
        let basis = build_traceless_basis(4).unwrap();
        assert_eq!(max_unit_action_norm(&Tensor::zeros(4, 4), &basis, 3, 0).unwrap(), 0.0);
        assert!(max_unit_action_norm(&Tensor::zeros(4, 4), &basis, 0, 0).is_err());
        let mut rng = trial_rng(18, 0);
        for (n, bound) in [(4usize, 4.0), (6, 32.0 / 6.0)] {
            let basis = build_traceless_basis(n).unwrap();
            let w = random_weyl(&mut rng, n);
            let m = max_unit_action_norm(w.tensor(), &basis, 1000, 9).unwrap();
            assert!(m <= bound * w.norm_sq() + 1e-9);
            assert!(m > 0.0);
        }
    }

    #[test]
    fn max_action_norm_dominates_direct_samples() {
        let n = 5;
        let basis = build_traceless_basis(n).unwrap();
        let mut rng = trial_rng(19, 0);
        let w = random_weyl(&mut rng, n);
        let probe = max_unit_action_norm(w.tensor(), &basis, 50, 1).unwrap();
        for _ in 0..20 {
            let mut x: Vec<f64> = (0..basis.len()).map(|_| standard_normal(&mut rng)).collect();
            let norm = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
            x.iter_mut().for_each(|v| *v /= norm);
            let s = basis.combine(&x);
            let direct = act(&s, w.tensor()).unwrap().norm_sq();
            assert!(direct <= probe + 1e-9);
        }
    }
}
