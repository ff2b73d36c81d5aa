use alloc::vec::Vec;

use super::{SymMatrix, Tensor};
use crate::error::{Error, Identity, Result};
use crate::scalar::Scalar;

/// Rank-4 tensor with the symmetries of a Riemann tensor:
/// `R_ijkl = −R_jikl = −R_ijlk = R_klij` and the first Bianchi identity.
///
/// Sign convention: the unit sphere has `R_ijij = 1` for `i ≠ j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor<T>(Tensor<T>);

/// Checks the four curvature symmetries and first Bianchi, reporting the first
/// violated identity and index. Floats are compared to `1e-12·max(1, max|R|)`.
pub fn check_curvature_identities<T: Scalar>(t: &Tensor<T>) -> Result<()> {
    if t.rank() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: t.rank() });
    }
    let n = t.n();
    let scale = t.max_abs();
    let fail = |identity, index| Err(Error::IdentityViolated { identity, index });
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = &t[[i, j, k, l]];
                    if !(v.clone() + t[[j, i, k, l]].clone()).is_negligible(scale) {
                        return fail(Identity::FirstPairAntisymmetry, [i, j, k, l]);
                    }
                    if !(v.clone() + t[[i, j, l, k]].clone()).is_negligible(scale) {
                        return fail(Identity::SecondPairAntisymmetry, [i, j, k, l]);
                    }
                    if !(v.clone() - t[[k, l, i, j]].clone()).is_negligible(scale) {
                        return fail(Identity::PairExchange, [i, j, k, l]);
                    }
                    let b = v.clone() + t[[i, k, l, j]].clone() + t[[i, l, j, k]].clone();
                    if !b.is_negligible(scale) {
                        return fail(Identity::FirstBianchi, [i, j, k, l]);
                    }
                }
            }
        }
    }
    Ok(())
}

fn is_canonical([i, j, k, l]: [usize; 4]) -> bool {
    i < j && k < l && (i, j) <= (k, l)
}

impl<T: Scalar> CurvatureTensor<T> {
    pub fn new(t: Tensor<T>) -> Result<Self> {
        check_curvature_identities(&t)?;
        Ok(CurvatureTensor(t))
    }

    pub fn zero(n: usize) -> Self {
        CurvatureTensor(Tensor::zeros(n, 4))
    }

    /// Builds `R` from canonical components (`i < j`, `k < l`,
    /// `(i, j) <= (k, l)`); every other component follows by symmetry.
    /// Unlisted canonical components are zero. The result must satisfy first
    /// Bianchi.
    pub fn from_canonical(n: usize, entries: impl IntoIterator<Item = ([usize; 4], T)>) -> Result<Self> {
        let mut t = Tensor::zeros(n, 4);
        for (idx, v) in entries {
            let [i, j, k, l] = idx;
            if idx.iter().any(|&x| x >= n) {
                return Err(Error::Precondition(alloc::format!("index {idx:?} out of range for n = {n}")));
            }
            if !is_canonical(idx) {
                return Err(Error::Precondition(alloc::format!("index {idx:?} is not canonical")));
            }
            for (a, b, c, d) in [(i, j, k, l), (k, l, i, j)] {
                t[[a, b, c, d]] = v.clone();
                t[[b, a, c, d]] = -v.clone();
                t[[a, b, d, c]] = -v.clone();
                t[[b, a, d, c]] = v.clone();
            }
        }
        Self::new(t)
    }

    /// Nonzero canonical components, lexicographic.
    pub fn canonical_entries(&self) -> Vec<([usize; 4], T)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in i..n {
                    for l in k + 1..n {
                        let idx = [i, j, k, l];
                        if is_canonical(idx) && !self.0[idx].is_zero() {
                            out.push((idx, self.0[idx].clone()));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn tensor(&self) -> &Tensor<T> {
        &self.0
    }

    pub fn into_tensor(self) -> Tensor<T> {
        self.0
    }

    /// `Ric_jl = Σ_i R_ijil`.
    pub fn ricci(&self) -> SymMatrix<T> {
        ricci_of(&self.0)
    }

    pub fn scalar_curvature(&self) -> T {
        self.ricci().trace()
    }

    pub fn norm_sq(&self) -> T {
        self.0.norm_sq()
    }

    pub fn scale(&self, c: &T) -> Self {
        CurvatureTensor(self.0.scale(c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(CurvatureTensor(self.0.add(&other.0)?))
    }

    pub fn to_f64(&self) -> CurvatureTensor<f64> {
        CurvatureTensor(self.0.to_f64())
    }

    /// `Σ_i R_ijil = 0` for all `j, l`.
    pub fn is_trace_free(&self) -> bool {
        self.trace_violation().is_none()
    }

    fn trace_violation(&self) -> Option<[usize; 4]> {
        let ric = self.ricci();
        let scale = self.0.max_abs() * self.n() as f64;
        for j in 0..self.n() {
            for l in 0..self.n() {
                if !ric.get(j, l).is_negligible(scale) {
                    return Some([0, j, 0, l]);
                }
            }
        }
        None
    }
}

fn ricci_of<T: Scalar>(t: &Tensor<T>) -> SymMatrix<T> {
    let n = t.n();
    SymMatrix::from_upper(n, |j, l| (0..n).fold(T::zero(), |acc, i| acc + t[[i, j, i, l]].clone()))
}

/// Kulkarni–Nomizu product
/// `(h∧k)_ijkl = h_ik k_jl + h_jl k_ik − h_il k_jk − h_jk k_il`.
pub fn kulkarni_nomizu<T: Scalar>(h: &SymMatrix<T>, k: &SymMatrix<T>) -> Result<Tensor<T>> {
    if h.n() != k.n() {
        return Err(Error::DimensionMismatch { expected: h.n(), found: k.n() });
    }
    Ok(Tensor::from_fn(h.n(), 4, |x| {
        let (i, j, a, b) = (x[0], x[1], x[2], x[3]);
        h.get(i, a).clone() * k.get(j, b).clone() + h.get(j, b).clone() * k.get(i, a).clone()
            - h.get(i, b).clone() * k.get(j, a).clone()
            - h.get(j, a).clone() * k.get(i, b).clone()
    }))
}

/// Constant-curvature-one tensor `δ_ik δ_jl − δ_il δ_jk` (half of `g∧g`).
pub fn kulkarni_nomizu_gg<T: Scalar>(n: usize) -> Result<CurvatureTensor<T>> {
    if n < 2 {
        return Err(Error::InvalidDimension { n, min: 2 });
    }
    let d = |a: usize, b: usize| if a == b { T::one() } else { T::zero() };
    Ok(CurvatureTensor(Tensor::from_fn(n, 4, |x| {
        d(x[0], x[2]) * d(x[1], x[3]) - d(x[0], x[3]) * d(x[1], x[2])
    })))
}

/// Scalar curvature `s` and a trace-free Weyl part `W` on `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EinsteinData<T> {
    scalar_curvature: T,
    weyl: CurvatureTensor<T>,
}

impl<T: Scalar> EinsteinData<T> {
    pub fn new(scalar_curvature: T, weyl: CurvatureTensor<T>) -> Result<Self> {
        if let Some(index) = weyl.trace_violation() {
            return Err(Error::IdentityViolated { identity: Identity::TraceFree, index });
        }
        Ok(EinsteinData { scalar_curvature, weyl })
    }

    pub fn n(&self) -> usize {
        self.weyl.n()
    }

    pub fn scalar_curvature(&self) -> &T {
        &self.scalar_curvature
    }

    pub fn weyl(&self) -> &CurvatureTensor<T> {
        &self.weyl
    }

    /// Mean eigenvalue of the second-kind operator, `λ̄ = s / (n(n−1))`.
    pub fn mean_eigenvalue(&self) -> T {
        let n = self.n();
        self.scalar_curvature.clone() / T::from_usize(n * (n - 1))
    }
}

/// `R = W + (s / (n(n−1))) (δ_ik δ_jl − δ_il δ_jk)`, whose Ricci tensor is
/// `(s/n)·id`.
pub fn assemble_einstein<T: Scalar>(data: &EinsteinData<T>) -> CurvatureTensor<T> {
    let n = data.n();
    let gg = kulkarni_nomizu_gg::<T>(n).expect("EinsteinData has n >= 2");
    let c = data.mean_eigenvalue();
    CurvatureTensor(data.weyl.0.add(&gg.0.scale(&c)).expect("same shape"))
}

/// Orthogonal projection of an arbitrary rank-4 array onto the Weyl tensors:
/// antisymmetrize both pairs, symmetrize under pair exchange, remove the
/// totally antisymmetric part `(T_ijkl + T_iklj + T_iljk)/3`, then subtract
/// `P ∧ g` with `P = (Ric − s g / (2(n−1))) / (n − 2)`.
///
/// For `n <= 3` every Weyl tensor vanishes and the zero tensor is returned.
pub fn project_to_weyl<T: Scalar>(t: &Tensor<T>) -> Result<CurvatureTensor<T>> {
    if t.rank() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: t.rank() });
    }
    let n = t.n();
    if n <= 3 {
        return Ok(CurvatureTensor::zero(n));
    }
    let half = T::ratio(1, 2);
    let third = T::ratio(1, 3);
    let a = t.sub(&t.permuted4([1, 0, 2, 3]))?.scale(&half);
    let a = a.sub(&a.permuted4([0, 1, 3, 2]))?.scale(&half);
    let a = a.add(&a.permuted4([2, 3, 0, 1]))?.scale(&half);
    let bianchi = a.add(&a.permuted4([0, 2, 3, 1]))?.add(&a.permuted4([0, 3, 1, 2]))?.scale(&third);
    let a = a.sub(&bianchi)?;

    let ric = ricci_of(&a);
    let s = ric.trace();
    let g = SymMatrix::<T>::identity(n);
    let p = ric
        .add_scaled(&(-s / T::from_usize(2 * (n - 1))), &g)
        .scale(&(T::one() / T::from_usize(n - 2)));
    let w = a.sub(&kulkarni_nomizu(&p, &g)?)?;
    Ok(CurvatureTensor(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_rational_tensor, random_tensor, trial_rng};
    use crate::scalar::{rat, Rational};

    #[test]
    fn gg_components_n2() {
        let t = kulkarni_nomizu_gg::<Rational>(2).unwrap();
        assert_eq!(t.tensor()[[0, 1, 0, 1]], rat(1, 1));
        assert_eq!(t.tensor()[[0, 1, 1, 0]], rat(-1, 1));
        assert_eq!(t.tensor()[[0, 0, 0, 0]], rat(0, 1));
    }

    #[test]
    fn gg_passes_identities_and_ricci() {
        for n in 2..=6 {
            let t = kulkarni_nomizu_gg::<Rational>(n).unwrap();
            check_curvature_identities(t.tensor()).unwrap();
            assert_eq!(t.ricci(), SymMatrix::identity(n).scale(&Rational::from_usize(n - 1)));
        }
        let t = kulkarni_nomizu_gg::<f64>(4).unwrap();
        assert_eq!(t.ricci(), SymMatrix::identity(4).scale(&3.0));
        assert!(kulkarni_nomizu_gg::<f64>(1).is_err());
    }

    #[test]
    fn gg_is_half_of_g_wedge_g() {
        let g = SymMatrix::<Rational>::identity(4);
        let wedge = kulkarni_nomizu(&g, &g).unwrap();
        assert_eq!(wedge.scale(&rat(1, 2)), kulkarni_nomizu_gg::<Rational>(4).unwrap().into_tensor());
    }

    #[test]
    fn sphere_and_flat_assembly() {
        let n = 5;
        let w = CurvatureTensor::<Rational>::zero(n);
        let sphere = assemble_einstein(&EinsteinData::new(Rational::from_usize(n * (n - 1)), w.clone()).unwrap());
        assert_eq!(sphere, kulkarni_nomizu_gg(n).unwrap());
        let flat = assemble_einstein(&EinsteinData::new(rat(0, 1), w).unwrap());
        assert_eq!(flat, CurvatureTensor::zero(n));
    }

    #[test]
    fn assembled_einstein_ricci_exact() {
        let mut rng = trial_rng(7, 0);
        let raw = random_rational_tensor(&mut rng, 4, 5);
        let w = project_to_weyl(&raw).unwrap();
        let r = assemble_einstein(&EinsteinData::new(rat(12, 1), w).unwrap());
        check_curvature_identities(r.tensor()).unwrap();
        // direct contraction oracle
        let n = 4;
        for j in 0..n {
            for l in 0..n {
                let mut acc = rat(0, 1);
                for i in 0..n {
                    acc += r.tensor()[[i, j, i, l]].clone();
                }
                assert_eq!(acc, if j == l { rat(3, 1) } else { rat(0, 1) });
            }
        }
        assert_eq!(r.scalar_curvature(), rat(12, 1));
    }

    #[test]
    fn einstein_rejects_traceful_weyl() {
        let gg = kulkarni_nomizu_gg::<f64>(4).unwrap();
        let err = EinsteinData::new(1.0, gg).unwrap_err();
        assert!(matches!(err, Error::IdentityViolated { identity: Identity::TraceFree, .. }));
    }

    #[test]
    fn weyl_projection_exact_properties() {
        let mut rng = trial_rng(1, 0);
        for n in [4, 5] {
            let raw = random_rational_tensor(&mut rng, n, 7);
            let w = project_to_weyl(&raw).unwrap();
            check_curvature_identities(w.tensor()).unwrap();
            assert!(w.is_trace_free());
            assert_eq!(w.ricci(), SymMatrix::zeros(n));
            // idempotence
            assert_eq!(project_to_weyl(w.tensor()).unwrap(), w);
        }
    }

    #[test]
    fn weyl_projection_kills_pure_trace() {
        for n in 4..=6 {
            let gg = kulkarni_nomizu_gg::<Rational>(n).unwrap();
            assert_eq!(project_to_weyl(gg.tensor()).unwrap(), CurvatureTensor::zero(n));
        }
    }

    #[test]
    fn weyl_projection_float_trace_small() {
        let mut rng = trial_rng(2, 0);
        let raw = random_tensor(&mut rng, 5, 4);
        let w = project_to_weyl(&raw).unwrap();
        let norm = libm::sqrt(w.norm_sq());
        let ric = w.ricci();
        assert!(ric.frobenius_norm() <= 1e-12 * norm);
        check_curvature_identities(w.tensor()).unwrap();
    }

    #[test]
    fn identity_errors_name_the_violation() {
        let mut t = Tensor::<Rational>::zeros(4, 4);
        t[[0, 1, 2, 3]] = rat(1, 1);
        let err = check_curvature_identities(&t).unwrap_err();
        assert_eq!(
            err,
            Error::IdentityViolated { identity: Identity::FirstPairAntisymmetry, index: [0, 1, 2, 3] }
        );
        // all pair symmetries present but Bianchi fails
        let r = CurvatureTensor::<Rational>::from_canonical(4, [([0, 1, 2, 3], rat(1, 1))]);
        assert!(matches!(
            r.unwrap_err(),
            Error::IdentityViolated { identity: Identity::FirstBianchi, .. }
        ));
    }

    #[test]
    fn canonical_round_trip() {
        let mut rng = trial_rng(3, 0);
        let w = project_to_weyl(&random_rational_tensor(&mut rng, 4, 3)).unwrap();
        let entries = w.canonical_entries();
        let back = CurvatureTensor::from_canonical(4, entries).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn canonical_rejects_bad_indices() {
        assert!(CurvatureTensor::<Rational>::from_canonical(3, [([1, 0, 1, 2], rat(1, 1))]).is_err());
        assert!(CurvatureTensor::<Rational>::from_canonical(3, [([0, 1, 0, 3], rat(1, 1))]).is_err());
        assert!(CurvatureTensor::<Rational>::from_canonical(3, [([1, 2, 0, 1], rat(1, 1))]).is_err());
    }
}
