//! State families: basis states, SU(2) coherent and squeezed states, cat
//! (NOON) states, the `|j,0> + |j,1>` superposition, random states, plus
//! closed-form reference covariances for `|j,m>`.
//!
//! Every pure state built here has its first non-negligible amplitude real
//! and non-negative.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::Tolerances;
use crate::covariance::CovariancePair;
use crate::error::{Error, Result};
use crate::half::HalfInteger;
use crate::spin::{apply_unitary, su2_unitary, OperatorTriple, QuantumState, RotationSpec, SpinBasis};
use crate::C64;

/// Squeezing parameter `xi >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct SqueezeParam(f64);

impl SqueezeParam {
    pub fn new(xi: f64) -> Result<Self> {
        if !(xi.is_finite() && xi >= 0.0) {
            return Err(Error::InvalidParameter(format!("squeezing parameter must be finite and >= 0, got {xi}")));
        }
        Ok(SqueezeParam(xi))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Two-mode occupation numbers `(n1, n2) = (j+m, j-m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SchwingerLabels {
    pub n1: u32,
    pub n2: u32,
}

impl SchwingerLabels {
    /// Inverse map, `j = (n1+n2)/2`, `m = (n1-n2)/2`.
    pub fn to_jm(self) -> (HalfInteger, HalfInteger) {
        let (n1, n2) = (self.n1 as i32, self.n2 as i32);
        (HalfInteger::from_twice(n1 + n2), HalfInteger::from_twice(n1 - n2))
    }
}

pub fn schwinger_labels(j: HalfInteger, m: HalfInteger) -> Result<SchwingerLabels> {
    if !m.is_projection_of(j) {
        return Err(Error::InvalidProjection { two_j: j.twice(), two_m: m.twice() });
    }
    Ok(SchwingerLabels { n1: ((j.twice() + m.twice()) / 2) as u32, n2: ((j.twice() - m.twice()) / 2) as u32 })
}

fn pure(basis: SpinBasis, amplitudes: DVector<C64>) -> Result<QuantumState> {
    Ok(QuantumState::pure_normalized(basis, amplitudes)?.with_phase_convention())
}

/// `|j, m>`.
pub fn basis_state(j: HalfInteger, m: HalfInteger) -> Result<QuantumState> {
    let basis = SpinBasis::new(j)?;
    let mut v = DVector::zeros(basis.dim());
    v[basis.index_of(m)?] = C64::from(1.0);
    pure(basis, v)
}

/// `U(theta, u) |j, j>`.
pub fn coherent_state(ops: &OperatorTriple, spec: &RotationSpec) -> Result<QuantumState> {
    let top = basis_state(ops.j(), ops.j())?;
    let u = su2_unitary(ops, spec)?;
    Ok(apply_unitary(&top, &u)?.with_phase_convention())
}

/// Unitary `V` with `V^dag (j1, j2, j3) V = (j3, j1, j2)`: its columns are
/// the eigenvectors of `j1` carrying the standard phases of the cyclically
/// relabeled triple `(j2, j3, j1)`.
pub fn cyclic_unitary(ops: &OperatorTriple) -> Result<crate::spin::Operator> {
    let axis = Vector3::new(1.0, 1.0, 1.0) / 3f64.sqrt();
    su2_unitary(ops, &RotationSpec::new(-2.0 * std::f64::consts::PI / 3.0, axis)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SqueezedApprox {
    pub state: QuantumState,
    /// False when `xi > 0.1`, where the first-order form is unreliable.
    pub within_validity: bool,
}

/// First-order squeezed state
/// `N [ |0> - (i/2) xi sqrt(j(j+1)) (|1> - |-1>) ]` written in the
/// eigenbasis of `j1` (taken as `j_perp1`; `j_perp2 = j2`, `j_par = j3`)
/// and returned in the `j3` basis.
pub fn squeezed_approx(ops: &OperatorTriple, xi: f64) -> Result<SqueezedApprox> {
    let xi = SqueezeParam::new(xi)?.value();
    let j = ops.j();
    if !j.is_integer() || j.twice() == 0 {
        return Err(Error::InvalidParameter(format!("approximate squeezed state needs integer j >= 1, got {j}")));
    }
    let basis = ops.basis();
    let mut local = DVector::<C64>::zeros(basis.dim());
    let amp = C64::new(0.0, -0.5 * xi * j.casimir().sqrt());
    local[basis.index_of(HalfInteger::ZERO)?] = C64::from(1.0);
    local[basis.index_of(HalfInteger::ONE)?] = amp;
    local[basis.index_of(HalfInteger::from_twice(-2))?] = -amp;
    let v = cyclic_unitary(ops)?;
    let state = pure(basis, v.matrix() * local)?;
    Ok(SqueezedApprox { state, within_validity: xi <= 0.1 })
}

/// Exact solution of `(j1 + i xi j2)|xi> = 0` from the singular vector of
/// the smallest singular value. Accepted when that value is at most
/// `tol.null_space * |A|_2`.
pub fn squeezed_exact(ops: &OperatorTriple, xi: f64) -> Result<QuantumState> {
    let xi = SqueezeParam::new(xi)?.value();
    let j = ops.j();
    if j.twice() == 0 {
        return Err(Error::InvalidParameter("squeezed states need j > 0".into()));
    }
    let a = ops.j1().matrix() + ops.j2().matrix() * C64::new(0.0, xi);
    let svd = a.svd(false, true);
    let v_t = svd
        .v_t
        .as_ref()
        .ok_or_else(|| Error::InternalConsistency("SVD did not return right singular vectors".into()))?;
    let sv = &svd.singular_values;
    let (k, sigma_min) = sv
        .iter()
        .copied()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap_or((0, f64::INFINITY));
    let norm = sv.max();
    if sigma_min > ops.tol().null_space * norm {
        return Err(Error::NoSqueezedState { two_j: j.twice(), xi, sigma: sigma_min });
    }
    let kernel: DVector<C64> = v_t.row(k).adjoint();
    pure(ops.basis(), kernel)
}

/// `(|j,j> + |j,-j>)/sqrt2`.
pub fn cat_state(j: HalfInteger) -> Result<QuantumState> {
    if j.twice() <= 0 {
        return Err(Error::InvalidParameter(format!("cat state needs j > 0, got {j}")));
    }
    let basis = SpinBasis::new(j)?;
    let mut v = DVector::zeros(basis.dim());
    v[0] = C64::from(1.0);
    v[basis.dim() - 1] = C64::from(1.0);
    pure(basis, v)
}

/// `(|j,0> + |j,1>)/sqrt2`.
pub fn ramp_state(j: HalfInteger) -> Result<QuantumState> {
    if !j.is_integer() || j.twice() < 2 {
        return Err(Error::InvalidParameter(format!("ramp state needs integer j >= 1, got {j}")));
    }
    let basis = SpinBasis::new(j)?;
    let mut v = DVector::zeros(basis.dim());
    v[basis.index_of(HalfInteger::ZERO)?] = C64::from(1.0);
    v[basis.index_of(HalfInteger::ONE)?] = C64::from(1.0);
    pure(basis, v)
}

/// Closed-form `M` and `M~` of `|j,m>`:
/// `M = diag(c - m^2, c - m^2, 0)/2` with `c = j(j+1)`, and `M~` equal to
/// `M` plus `i m/2` at (1,2) and `-i m/2` at (2,1).
pub fn reference_covariance_jm(j: HalfInteger, m: HalfInteger) -> Result<CovariancePair> {
    if !m.is_projection_of(j) {
        return Err(Error::InvalidProjection { two_j: j.twice(), two_m: m.twice() });
    }
    let (c, mv) = (j.casimir(), m.value());
    let d = 0.5 * (c - mv * mv);
    let m_real = Matrix3::from_diagonal(&Vector3::new(d, d, 0.0));
    let mut m_herm = m_real.map(C64::from);
    m_herm[(0, 1)] = C64::new(0.0, 0.5 * mv);
    m_herm[(1, 0)] = C64::new(0.0, -0.5 * mv);
    Ok(CovariancePair { m_real, m_herm, mean: Vector3::new(0.0, 0.0, mv), j, tol: Tolerances::default() })
}

/// Closed-form principal variances of `|j,m>` in the order
/// `(perp1, perp2, par)`, unsorted: the symmetric ones
/// `((c - m^2)/2, (c - m^2)/2, 0)` and the Hermitian ones
/// `((c - m(m+1))/2, (c - m(m-1))/2, 0)`.
pub fn reference_principal_jm(j: HalfInteger, m: HalfInteger) -> Result<([f64; 3], [f64; 3])> {
    if !m.is_projection_of(j) {
        return Err(Error::InvalidProjection { two_j: j.twice(), two_m: m.twice() });
    }
    let (c, mv) = (j.casimir(), m.value());
    let real = [0.5 * (c - mv * mv), 0.5 * (c - mv * mv), 0.0];
    let herm = [0.5 * (c - mv * (mv + 1.0)), 0.5 * (c - mv * (mv - 1.0)), 0.0];
    Ok((real, herm))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RandomKind {
    Pure,
    Mixed,
}

fn complex_normal(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Seeded random state: a normalized complex Gaussian vector, or the
/// Ginibre density matrix `G G^dag / tr(G G^dag)`.
pub fn random_state(j: HalfInteger, seed: u64, kind: RandomKind) -> Result<QuantumState> {
    let basis = SpinBasis::new(j)?;
    let d = basis.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        RandomKind::Pure => pure(basis, DVector::from_fn(d, |_, _| complex_normal(&mut rng))),
        RandomKind::Mixed => {
            let g = DMatrix::from_fn(d, d, |_, _| complex_normal(&mut rng));
            let mut rho = &g * g.adjoint();
            let tr = rho.trace();
            rho /= tr;
            QuantumState::density(basis, rho, &Tolerances::default())
        }
    }
}

/// Seeded uniformly distributed rotation (Haar axis, uniform angle).
pub fn random_rotation(seed: u64) -> RotationSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let axis = Vector3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        if let Ok(spec) = RotationSpec::about(theta, axis) {
            return spec;
        }
    }
}

/// Seeded random state with `<j> = 0`.
///
/// Pure: random amplitudes on a set of `m` values closed under `m -> -m`
/// with no two neighbours, `|c_m| = |c_-m|`, then a random rotation.
/// Mixed: a Ginibre state averaged over the pi rotations about x, y and z.
pub fn random_zero_mean_state(ops: &OperatorTriple, seed: u64, kind: RandomKind) -> Result<QuantumState> {
    let j = ops.j();
    let basis = ops.basis();
    match kind {
        RandomKind::Pure => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tj = j.twice();
            // Integer j: even m. Half-integer j: m = j, j-2, ... >= 3/2.
            let positives: Vec<i32> = if j.is_integer() {
                (0..=tj).filter(|t| t % 4 == 0).collect()
            } else {
                (0..).map(|k| tj - 4 * k).take_while(|&t| t >= 3).collect()
            };
            if positives.is_empty() {
                return Err(Error::InvalidParameter(format!("no zero-mean pure state for j = {j}")));
            }
            let mut v = DVector::<C64>::zeros(basis.dim());
            for &tm in &positives {
                let mag: f64 = rng.sample::<f64, _>(StandardNormal).abs() + 0.05;
                for sign in [1, -1] {
                    if tm == 0 && sign < 0 {
                        continue;
                    }
                    let phase = rng.random_range(0.0..std::f64::consts::TAU);
                    v[basis.index_of(HalfInteger::from_twice(sign * tm))?] = C64::from_polar(mag, phase);
                }
            }
            let psi = QuantumState::pure_normalized(basis, v)?;
            let u = su2_unitary(ops, &random_rotation(seed ^ 0x9e37_79b9_7f4a_7c15))?;
            Ok(apply_unitary(&psi, &u)?.with_phase_convention())
        }
        RandomKind::Mixed => {
            let base = random_state(j, seed, RandomKind::Mixed)?;
            let rho = base.density_matrix();
            let mut acc = rho.clone();
            for axis in [Vector3::x(), Vector3::y(), Vector3::z()] {
                let u = su2_unitary(ops, &RotationSpec::new(std::f64::consts::PI, axis)?)?;
                acc += u.matrix() * &rho * u.matrix().adjoint();
            }
            acc /= C64::from(4.0);
            QuantumState::density(basis, acc, ops.tol())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::{covariance_pair, CovarianceKind};
    use crate::spin::{mean_vector, spin_operators};

    fn h(t: i32) -> HalfInteger {
        HalfInteger::from_twice(t)
    }

    #[test]
    fn basis_state_indices() {
        let s = basis_state(h(2), h(0)).unwrap();
        assert_eq!(s.amplitudes().unwrap()[1], C64::from(1.0));
        let s = basis_state(h(1), h(1)).unwrap();
        assert_eq!(s.amplitudes().unwrap()[0], C64::from(1.0));
        assert!(matches!(basis_state(h(2), h(1)), Err(Error::InvalidProjection { .. })));
    }

    #[test]
    fn schwinger_mapping() {
        assert_eq!(schwinger_labels(h(2), h(2)).unwrap(), SchwingerLabels { n1: 2, n2: 0 });
        assert_eq!(schwinger_labels(h(1), h(-1)).unwrap(), SchwingerLabels { n1: 0, n2: 1 });
        for tm in (-10..=10).step_by(2) {
            let labels = schwinger_labels(h(10), h(tm)).unwrap();
            assert_eq!(labels.to_jm(), (h(10), h(tm)));
        }
        assert!(schwinger_labels(h(2), h(4)).is_err());
    }

    #[test]
    fn cyclic_unitary_relabels_components() {
        for tj in 1..=6 {
            let ops = spin_operators(h(tj)).unwrap();
            let v = cyclic_unitary(&ops).unwrap();
            let conj = |k: usize| &(&v.adjoint() * ops.get(k)) * &v;
            assert!((conj(0) - ops.j3().clone()).max_abs() < 1e-10, "2j={tj}");
            assert!((conj(1) - ops.j1().clone()).max_abs() < 1e-10, "2j={tj}");
            assert!((conj(2) - ops.j2().clone()).max_abs() < 1e-10, "2j={tj}");
        }
    }

    #[test]
    fn squeezed_approx_at_zero_is_j1_null_vector() {
        let ops = spin_operators(h(4)).unwrap();
        let s = squeezed_approx(&ops, 0.0).unwrap().state;
        let psi = s.amplitudes().unwrap();
        assert!((ops.j1().matrix() * psi).norm() < 1e-12);
        assert!(squeezed_approx(&ops, 0.2).map(|a| !a.within_validity).unwrap());
        assert!(squeezed_approx(&spin_operators(h(3)).unwrap(), 0.01).is_err());
    }

    #[test]
    fn squeezed_exact_spin_one_closed_form() {
        // Kernel of ((1+xi) j+ + (1-xi) j-)/2 for j = 1 is (-(1+xi), 0, 1-xi).
        let ops = spin_operators(h(2)).unwrap();
        for xi in [0.0, 0.01, 0.3, 1.0, 2.5] {
            let s = squeezed_exact(&ops, xi).unwrap();
            let expected = DVector::from_vec(vec![C64::from(-(1.0 + xi)), C64::from(0.0), C64::from(1.0 - xi)]);
            let expected = expected.normalize();
            let overlap = s.amplitudes().unwrap().dotc(&expected).norm();
            assert!((overlap - 1.0).abs() < 1e-12, "xi={xi}");
        }
    }

    #[test]
    fn squeezed_exact_rejects_half_integer_off_coherent_point() {
        let ops = spin_operators(h(3)).unwrap();
        assert!(matches!(squeezed_exact(&ops, 0.3), Err(Error::NoSqueezedState { .. })));
        // At xi = 1 the equation is j+|psi> = 0, solvable for every j.
        assert!(squeezed_exact(&ops, 1.0).is_ok());
        assert!(squeezed_exact(&ops, -0.1).is_err());
    }

    #[test]
    fn cat_and_ramp_errors() {
        assert!(cat_state(h(0)).is_err());
        assert!(ramp_state(h(1)).is_err());
        assert!(ramp_state(h(0)).is_err());
        assert!(ramp_state(h(2)).is_ok());
    }

    #[test]
    fn spin_one_ramp_covariance() {
        let j = h(2);
        let ops = spin_operators(j).unwrap();
        let pair = covariance_pair(&ramp_state(j).unwrap(), &ops).unwrap();
        let expected = Matrix3::from_diagonal(&Vector3::new(0.25, 0.75, 0.25));
        assert!((pair.m_real - expected).abs().max() < 1e-12);
        assert!((pair.m_herm[(0, 1)] - C64::new(0.0, 0.25)).norm() < 1e-12);
        assert!((pair.m_herm[(1, 2)] - C64::new(0.0, 2f64.sqrt() / 4.0)).norm() < 1e-12);
    }

    #[test]
    fn random_states_are_deterministic_and_valid() {
        for kind in [RandomKind::Pure, RandomKind::Mixed] {
            let a = random_state(h(5), 42, kind).unwrap();
            let b = random_state(h(5), 42, kind).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, random_state(h(5), 43, kind).unwrap());
            assert!((a.weight() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_mean_generators() {
        for tj in [2, 3, 4, 5, 10, 25] {
            let ops = spin_operators(h(tj)).unwrap();
            for kind in [RandomKind::Pure, RandomKind::Mixed] {
                let s = random_zero_mean_state(&ops, 7, kind).unwrap();
                let mean = mean_vector(&s, &ops).unwrap();
                assert!(mean.norm() < 1e-10, "2j={tj} {kind:?} mean={mean}");
            }
        }
        let ops = spin_operators(h(1)).unwrap();
        assert!(random_zero_mean_state(&ops, 1, RandomKind::Pure).is_err());
    }

    #[test]
    fn reference_matches_for_small_spins() {
        for tj in 0..=6 {
            let ops = spin_operators(h(tj)).unwrap();
            for m in ops.basis().projections() {
                let got = covariance_pair(&basis_state(h(tj), m).unwrap(), &ops).unwrap();
                let want = reference_covariance_jm(h(tj), m).unwrap();
                assert!((got.m_real - want.m_real).abs().max() < 1e-12);
                assert!((got.m_herm - want.m_herm).map(|z| z.norm()).max() < 1e-12);
                let herm = got.principal(CovarianceKind::ComplexHermitian).unwrap();
                let (_, mut want_h) = reference_principal_jm(h(tj), m).unwrap();
                want_h.sort_by(|a, b| b.total_cmp(a));
                for k in 0..3 {
                    assert!((herm.variances[k] - want_h[k]).abs() < 1e-12);
                }
            }
        }
    }
}
