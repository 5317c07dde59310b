//! Real symmetric and complex Hermitian covariance matrices of `(j1, j2, j3)`
//! and their principal decompositions.
//!
//! `M[k][l] = (<jk jl> + <jl jk>)/2 - <jk><jl>` and
//! `M~[k][l] = <jk jl> - <jk><jl>`. The two differ only by the
//! antisymmetric mean-spin term, `M = M~ - (i/2) eps_kln <jn>`.
//!
//! Frame conventions: for the real kind the frame `R_d` has the principal
//! axes as rows, so `R_d M R_d^t` is diagonal and `J = R_d j`. For the
//! Hermitian kind the frame `U_d` has rows `u_k^dag`, so `U_d M~ U_d^dag` is
//! diagonal; the principal components are `J~_k = u_k . j`, i.e. the
//! coefficient matrix `conj(U_d)`, which is special unitary together with
//! `U_d`.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::half::HalfInteger;
use crate::jacobi::{hermitian_eigen, symmetric_eigen};
use crate::spin::{
    apply_unitary, component, max_abs, su2_unitary, trace_product, Operator, OperatorTriple, QuantumState,
    RotationSpec, StateRepr,
};
use crate::{levi_civita, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CovarianceKind {
    RealSymmetric,
    ComplexHermitian,
}

/// `M` and `M~` of one state.
#[derive(Clone, Debug, PartialEq)]
pub struct CovariancePair {
    pub m_real: Matrix3<f64>,
    pub m_herm: Matrix3<C64>,
    pub mean: Vector3<f64>,
    pub j: HalfInteger,
    pub tol: Tolerances,
}

/// Principal variances (descending) with their axes and diagonalizing frame.
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalDecomposition {
    pub kind: CovarianceKind,
    pub variances: [f64; 3],
    /// Unit eigenvectors `u_k` (real entries for the real kind).
    pub axes: [Vector3<C64>; 3],
    /// Rows are `u_k^dag`; `frame * matrix * frame^dag` is diagonal.
    pub frame: Matrix3<C64>,
}

impl PrincipalDecomposition {
    /// `R_d` for the real kind.
    pub fn rotation(&self) -> Option<Matrix3<f64>> {
        match self.kind {
            CovarianceKind::RealSymmetric => Some(self.frame.map(|z| z.re)),
            CovarianceKind::ComplexHermitian => None,
        }
    }

    pub fn real_axes(&self) -> Option<[Vector3<f64>; 3]> {
        self.rotation().map(|_| self.axes.map(|a| a.map(|z| z.re)))
    }

    /// Principal components `J_k = u_k . j`.
    pub fn components(&self, ops: &OperatorTriple) -> Result<[Operator; 3]> {
        Ok([
            component(ops, &self.axes[0])?,
            component(ops, &self.axes[1])?,
            component(ops, &self.axes[2])?,
        ])
    }

    pub fn largest(&self) -> f64 {
        self.variances[0]
    }
}

/// Second moments and means in one pass.
fn moments(state: &QuantumState, ops: &OperatorTriple) -> Result<(Matrix3<C64>, Vector3<C64>)> {
    if state.basis() != ops.basis() {
        return Err(Error::BasisMismatch { expected: ops.j().twice(), found: state.basis().j().twice() });
    }
    let mut second = Matrix3::<C64>::zeros();
    let mut mean = Vector3::<C64>::zeros();
    match state.repr() {
        StateRepr::Pure(psi) => {
            let phi: Vec<_> = ops.iter().map(|op| op.matrix() * psi).collect();
            for k in 0..3 {
                mean[k] = psi.dotc(&phi[k]);
                for l in 0..3 {
                    second[(k, l)] = phi[k].dotc(&phi[l]);
                }
            }
        }
        StateRepr::Density(rho) => {
            let weighted: Vec<_> = ops.iter().map(|op| rho * op.matrix()).collect();
            for k in 0..3 {
                mean[k] = weighted[k].trace();
                for l in 0..3 {
                    second[(k, l)] = trace_product(&weighted[k], ops.get(l).matrix());
                }
            }
        }
    }
    Ok((second, mean))
}

/// Builds and validates `M` and `M~` for `state`.
pub fn covariance_pair(state: &QuantumState, ops: &OperatorTriple) -> Result<CovariancePair> {
    let tol = *ops.tol();
    let (second, mean_c) = moments(state, ops)?;
    let scale = 1.0 + second.map(|z| z.norm()).max();
    if let Some(k) = (0..3).find(|&k| mean_c[k].im.abs() > tol.hermitian * scale) {
        return Err(Error::InternalConsistency(format!("<j{}> has imaginary part {:e}", k + 1, mean_c[k].im)));
    }
    let mean = mean_c.map(|z| z.re);
    let outer = mean * mean.transpose();
    let mut m_real = Matrix3::zeros();
    for k in 0..3 {
        for l in 0..3 {
            let sym = (second[(k, l)] + second[(l, k)]) * 0.5;
            if sym.im.abs() > tol.hermitian * scale {
                return Err(Error::InternalConsistency(format!(
                    "symmetrized moment ({k},{l}) has imaginary part {:e}",
                    sym.im
                )));
            }
            m_real[(k, l)] = sym.re - outer[(k, l)];
        }
    }
    let raw_herm = second - outer.map(C64::from);
    let herm_defect = (raw_herm - raw_herm.adjoint()).map(|z| z.norm()).max();
    if herm_defect > tol.hermitian * scale {
        return Err(Error::InternalConsistency(format!("M~ not Hermitian (defect {herm_defect:e})")));
    }
    let pair = CovariancePair {
        m_real: (m_real + m_real.transpose()) * 0.5,
        m_herm: (raw_herm + raw_herm.adjoint()) * C64::from(0.5),
        mean,
        j: ops.j(),
        tol,
    };
    pair.validate()?;
    Ok(pair)
}

impl CovariancePair {
    /// Checks symmetry, the `M`/`M~` relation, equal traces and positivity.
    pub fn validate(&self) -> Result<()> {
        let tol = &self.tol;
        let scale = 1.0 + self.m_real.abs().max().max(self.m_herm.map(|z| z.norm()).max());
        let fail = |what: String| Err(Error::InternalConsistency(what));
        let sym = (self.m_real - self.m_real.transpose()).abs().max();
        if sym > tol.hermitian * scale {
            return fail(format!("M not symmetric (defect {sym:e})"));
        }
        let herm = (self.m_herm - self.m_herm.adjoint()).map(|z| z.norm()).max();
        if herm > tol.hermitian * scale {
            return fail(format!("M~ not Hermitian (defect {herm:e})"));
        }
        let rel = (self.m_real.map(C64::from) - self.expected_real_from_herm()).map(|z| z.norm()).max();
        if rel > tol.hermitian * scale {
            return fail(format!("M != M~ - (i/2) eps <j> (defect {rel:e})"));
        }
        let dtr = (self.m_real.trace() - self.m_herm.trace().re).abs();
        if dtr > tol.covariance * scale {
            return fail(format!("tr M != tr M~ (difference {dtr:e})"));
        }
        let min_real = symmetric_eigen(&self.m_real, tol.jacobi).values.min();
        let min_herm = hermitian_eigen(&self.m_herm, tol.jacobi).values.min();
        let floor = -tol.covariance_psd * scale;
        if min_real < floor || min_herm < floor {
            return fail(format!("covariance not positive semidefinite (min eigenvalues {min_real:e}, {min_herm:e})"));
        }
        Ok(())
    }

    fn expected_real_from_herm(&self) -> Matrix3<C64> {
        let mut out = self.m_herm;
        for k in 0..3 {
            for l in 0..3 {
                let anti: f64 = (0..3).map(|n| levi_civita(k, l, n) * self.mean[n]).sum();
                out[(k, l)] -= C64::new(0.0, 0.5 * anti);
            }
        }
        out
    }

    pub fn mean_norm(&self) -> f64 {
        self.mean.norm()
    }

    /// `tr M`, the total variance.
    pub fn trace(&self) -> f64 {
        self.m_real.trace()
    }

    pub fn principal(&self, kind: CovarianceKind) -> Result<PrincipalDecomposition> {
        match kind {
            CovarianceKind::RealSymmetric => principal_real(&self.m_real, &self.tol),
            CovarianceKind::ComplexHermitian => principal_hermitian(&self.m_herm, &self.tol),
        }
    }

    /// `u^t M u` for real `u`, `u^dag M~ u` otherwise.
    pub fn variance_along(&self, u: &Vector3<C64>) -> Result<f64> {
        check_unit(u, &self.tol)?;
        let v = if is_real(u) {
            let r = u.map(|z| z.re);
            r.dot(&(self.m_real * r))
        } else {
            u.dotc(&(self.m_herm * u)).re
        };
        if v < -self.tol.covariance_psd {
            return Err(Error::InternalConsistency(format!("negative variance {v:e}")));
        }
        Ok(v)
    }

    pub fn variance_along_real(&self, u: &Vector3<f64>) -> Result<f64> {
        self.variance_along(&u.map(C64::from))
    }

    /// `v^t M u` when both directions are real, `v^dag M~ u` otherwise.
    pub fn correlation(&self, u: &Vector3<C64>, v: &Vector3<C64>) -> Result<C64> {
        let kind = if is_real(u) && is_real(v) {
            CovarianceKind::RealSymmetric
        } else {
            CovarianceKind::ComplexHermitian
        };
        self.correlation_with(kind, u, v)
    }

    /// Correlation through an explicitly chosen matrix. The real kind
    /// requires real directions.
    pub fn correlation_with(&self, kind: CovarianceKind, u: &Vector3<C64>, v: &Vector3<C64>) -> Result<C64> {
        check_unit(u, &self.tol)?;
        check_unit(v, &self.tol)?;
        match kind {
            CovarianceKind::RealSymmetric => {
                if !(is_real(u) && is_real(v)) {
                    return Err(Error::InvalidParameter("symmetric correlation needs real directions".into()));
                }
                let (ur, vr) = (u.map(|z| z.re), v.map(|z| z.re));
                Ok(C64::from(vr.dot(&(self.m_real * ur))))
            }
            CovarianceKind::ComplexHermitian => Ok(v.dotc(&(self.m_herm * u))),
        }
    }
}

fn is_real(u: &Vector3<C64>) -> bool {
    u.iter().all(|z| z.im == 0.0)
}

fn check_unit(u: &Vector3<C64>, tol: &Tolerances) -> Result<()> {
    let dev = u.norm() - 1.0;
    if !(dev.abs() <= tol.unit_vector) {
        return Err(Error::NotUnitVector(dev));
    }
    Ok(())
}

/// Indices of `values` in descending order; values closer than the
/// degeneracy threshold keep the solver's order.
fn descending_order(values: &Vector3<f64>, tol: &Tolerances) -> [usize; 3] {
    let scale = values.abs().max();
    let gap = tol.degeneracy * scale;
    let mut idx = [0, 1, 2];
    for i in 1..3 {
        let mut k = i;
        while k > 0 && values[idx[k]] > values[idx[k - 1]] + gap {
            idx.swap(k, k - 1);
            k -= 1;
        }
    }
    idx
}

fn clamp(value: f64, scale: f64, tol: &Tolerances) -> Result<f64> {
    if value < -tol.covariance_psd * (1.0 + scale) {
        return Err(Error::InternalConsistency(format!("negative principal variance {value:e}")));
    }
    Ok(value.max(0.0))
}

/// First entry whose modulus is within 1e-9 of the largest.
fn pivot(u: &Vector3<C64>) -> usize {
    let biggest = u.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
    u.iter().position(|z| z.norm() >= biggest * (1.0 - 1e-9)).unwrap_or(0)
}

/// Decomposes a real symmetric 3x3 matrix. The first two axes have their
/// largest entry positive; the third is sign-flipped as needed for det = +1.
pub fn principal_real(m: &Matrix3<f64>, tol: &Tolerances) -> Result<PrincipalDecomposition> {
    let eig = symmetric_eigen(m, tol.jacobi);
    let order = descending_order(&eig.values, tol);
    let scale = m.abs().max();
    let mut variances = [0.0; 3];
    let mut axes: [Vector3<f64>; 3] = [Vector3::zeros(); 3];
    for (slot, &col) in order.iter().enumerate() {
        variances[slot] = clamp(eig.values[col], scale, tol)?;
        let mut a: Vector3<f64> = eig.vectors.column(col).into_owned();
        let p = pivot(&a.map(C64::from));
        if a[p] < 0.0 {
            a = -a;
        }
        axes[slot] = a;
    }
    let mut rot = Matrix3::from_rows(&[axes[0].transpose(), axes[1].transpose(), axes[2].transpose()]);
    if rot.determinant() < 0.0 {
        axes[2] = -axes[2];
        rot = Matrix3::from_rows(&[axes[0].transpose(), axes[1].transpose(), axes[2].transpose()]);
    }
    Ok(PrincipalDecomposition {
        kind: CovarianceKind::RealSymmetric,
        variances,
        axes: axes.map(|a| a.map(C64::from)),
        frame: rot.map(C64::from),
    })
}

/// Decomposes a Hermitian 3x3 matrix. The first two axes have their
/// largest entry real and positive; the third absorbs the phase that makes
/// the frame special unitary.
pub fn principal_hermitian(m: &Matrix3<C64>, tol: &Tolerances) -> Result<PrincipalDecomposition> {
    let eig = hermitian_eigen(m, tol.jacobi);
    let order = descending_order(&eig.values, tol);
    let scale = m.map(|z| z.norm()).max();
    let mut variances = [0.0; 3];
    let mut axes: [Vector3<C64>; 3] = [Vector3::zeros(); 3];
    for (slot, &col) in order.iter().enumerate() {
        variances[slot] = clamp(eig.values[col], scale, tol)?;
        let mut a: Vector3<C64> = eig.vectors.column(col).into_owned();
        let p = pivot(&a);
        let phase = a[p].conj() / a[p].norm();
        a *= phase;
        a[p] = C64::from(a[p].re);
        axes[slot] = a;
    }
    let columns = Matrix3::from_columns(&[axes[0], axes[1], axes[2]]);
    let det = columns.determinant();
    axes[2] *= det.conj() / det.norm();
    let frame = Matrix3::from_columns(&[axes[0], axes[1], axes[2]]).adjoint();
    Ok(PrincipalDecomposition { kind: CovarianceKind::ComplexHermitian, variances, axes, frame })
}

/// Right-handed triad `(e_perp1, e_perp2, e_par)` adapted to `mean`.
///
/// `e_par = mean/|mean|`; `e_perp1` is the Cartesian axis least aligned
/// with `e_par` (first one on ties), orthogonalized; `e_perp2 = e_par x
/// e_perp1`. Which transversal axis is called "1" is this crate's own
/// labeling.
pub fn longitudinal_frame(mean: &Vector3<f64>, eps_mean: f64) -> Result<[Vector3<f64>; 3]> {
    let n = mean.norm();
    if !(n > eps_mean) {
        return Err(Error::VanishingMean(n));
    }
    let par = mean / n;
    let least = (0..3)
        .min_by(|&a, &b| par[a].abs().total_cmp(&par[b].abs()))
        .unwrap_or(0);
    let seed = Vector3::ith(least, 1.0);
    let perp1 = (seed - par * par.dot(&seed)).normalize();
    let perp2 = par.cross(&perp1);
    Ok([perp1, perp2, par])
}

/// Outcome of the `exp(i pi a.j)` parity test.
#[derive(Clone, Debug, PartialEq)]
pub struct ParityCheck {
    /// `|U rho U^dag - rho|_inf <= tol.parity`.
    pub symmetric: bool,
    pub deviation: f64,
    /// Symmetrized correlations `e_perp_k^t M a` for the two transversal axes.
    pub residuals: [f64; 2],
    /// `|M a - (a^t M a) a|` is below tolerance.
    pub axis_principal: bool,
    pub principal_residual: f64,
}

/// Tests invariance of `state` under `U = exp(i pi axis.j)` and whether
/// `axis` is a principal axis of `M`. A symmetric state whose axis is not
/// principal is reported as an internal-consistency error.
pub fn parity_principal_check(state: &QuantumState, ops: &OperatorTriple, axis: &Vector3<f64>) -> Result<ParityCheck> {
    let tol = ops.tol();
    let spec = RotationSpec::new_with(std::f64::consts::PI, *axis, tol)?;
    let u = su2_unitary(ops, &spec)?;
    let rotated = apply_unitary(state, &u)?;
    let deviation = max_abs(&(rotated.density_matrix() - state.density_matrix()));
    let symmetric = deviation <= tol.parity;

    let pair = covariance_pair(state, ops)?;
    let [perp1, perp2, par] = longitudinal_frame(axis, 0.0)?;
    let m_axis = pair.m_real * par;
    let residuals = [perp1.dot(&m_axis), perp2.dot(&m_axis)];
    let principal_residual = (m_axis - par * par.dot(&m_axis)).norm();
    let axis_principal = principal_residual <= tol.parity * (1.0 + pair.m_real.abs().max());
    if symmetric && !axis_principal {
        return Err(Error::InternalConsistency(format!(
            "parity-symmetric state but axis is not principal (residual {principal_residual:e})"
        )));
    }
    Ok(ParityCheck { symmetric, deviation, residuals, axis_principal, principal_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{spin_operators, SpinBasis};
    use nalgebra::DVector;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ket(tj: i32, tm: i32) -> (QuantumState, OperatorTriple) {
        let j = HalfInteger::from_twice(tj);
        let ops = spin_operators(j).unwrap();
        let b = SpinBasis::new(j).unwrap();
        let mut v = DVector::zeros(b.dim());
        v[b.index_of(HalfInteger::from_twice(tm)).unwrap()] = c(1.0, 0.0);
        (QuantumState::pure(b, v, &Tolerances::default()).unwrap(), ops)
    }

    fn close3(a: &Matrix3<f64>, b: &Matrix3<f64>, tol: f64) -> bool {
        (a - b).abs().max() <= tol
    }

    #[test]
    fn j1_m0_covariance() {
        let (s, ops) = ket(2, 0);
        let p = covariance_pair(&s, &ops).unwrap();
        let expected = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 0.0));
        assert!(close3(&p.m_real, &expected, 1e-12));
        assert!((p.m_herm - expected.map(C64::from)).map(|z| z.norm()).max() < 1e-12);
    }

    #[test]
    fn j1_m1_covariance() {
        let (s, ops) = ket(2, 2);
        let p = covariance_pair(&s, &ops).unwrap();
        assert!(close3(&p.m_real, &Matrix3::from_diagonal(&Vector3::new(0.5, 0.5, 0.0)), 1e-12));
        let mut expected = Matrix3::<C64>::zeros();
        expected[(0, 0)] = c(0.5, 0.0);
        expected[(1, 1)] = c(0.5, 0.0);
        expected[(0, 1)] = c(0.0, 0.5);
        expected[(1, 0)] = c(0.0, -0.5);
        assert!((p.m_herm - expected).map(|z| z.norm()).max() < 1e-12);

        let real = p.principal(CovarianceKind::RealSymmetric).unwrap();
        assert!((real.variances[0] - 0.5).abs() < 1e-12);
        assert!((real.variances[1] - 0.5).abs() < 1e-12);
        assert!(real.variances[2].abs() < 1e-12);

        let herm = p.principal(CovarianceKind::ComplexHermitian).unwrap();
        assert!((herm.variances[0] - 1.0).abs() < 1e-12);
        assert!(herm.variances[1].abs() < 1e-12 && herm.variances[2].abs() < 1e-12);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // Top axis ~ (1, -i, 0)/sqrt2, i.e. J~ = j-/sqrt2.
        let top = herm.axes[0];
        let target = Vector3::new(c(r, 0.0), c(0.0, -r), c(0.0, 0.0));
        assert!(top.dotc(&target).norm() > 1.0 - 1e-12);
        // The null space is spanned by (1, i, 0)/sqrt2 and z.
        let plus = Vector3::new(c(r, 0.0), c(0.0, r), c(0.0, 0.0));
        let weight: f64 = herm.axes[1..].iter().map(|a| a.dotc(&plus).norm_sqr()).sum();
        assert!((weight - 1.0).abs() < 1e-12);
    }

    #[test]
    fn isotropic_matrix_keeps_identity_frame() {
        let tol = Tolerances::default();
        for sigma2 in [0.0, 0.25, 3.0] {
            let m = Matrix3::identity() * sigma2;
            let d = principal_real(&m, &tol).unwrap();
            assert_eq!(d.variances, [sigma2; 3]);
            assert_eq!(d.rotation().unwrap(), Matrix3::identity());
            let h = principal_hermitian(&m.map(C64::from), &tol).unwrap();
            assert_eq!(h.frame, Matrix3::identity());
        }
    }

    #[test]
    fn frames_diagonalize_and_have_unit_determinant() {
        let tol = Tolerances::default();
        let m = Matrix3::new(2.0, 0.3, -0.1, 0.3, 1.0, 0.4, -0.1, 0.4, 0.5);
        let d = principal_real(&m, &tol).unwrap();
        let r = d.rotation().unwrap();
        let diag = r * m * r.transpose();
        for k in 0..3 {
            assert!((diag[(k, k)] - d.variances[k]).abs() < 1e-12);
        }
        assert!((diag - Matrix3::from_diagonal(&diag.diagonal())).abs().max() < 1e-12);
        assert!((r.determinant() - 1.0).abs() < 1e-12);
        assert!(d.variances[0] >= d.variances[1] && d.variances[1] >= d.variances[2]);

        let mut h = m.map(C64::from);
        h[(0, 1)] = c(0.3, 0.7);
        h[(1, 0)] = c(0.3, -0.7);
        h[(0, 0)] = c(3.0, 0.0);
        let e = principal_hermitian(&h, &tol).unwrap();
        let diag = e.frame * h * e.frame.adjoint();
        for k in 0..3 {
            assert!((diag[(k, k)] - c(e.variances[k], 0.0)).norm() < 1e-12);
        }
        assert!((e.frame.determinant() - c(1.0, 0.0)).norm() < 1e-12);
        for a in &e.axes[..2] {
            let p = pivot(a);
            assert!(a[p].im == 0.0 && a[p].re > 0.0);
        }
    }

    #[test]
    fn negative_eigenvalue_is_an_error() {
        let m = Matrix3::from_diagonal(&Vector3::new(1.0, 0.0, -1e-6));
        assert!(matches!(principal_real(&m, &Tolerances::default()), Err(Error::InternalConsistency(_))));
        let tiny = Matrix3::from_diagonal(&Vector3::new(1.0, 0.0, -1e-12));
        assert_eq!(principal_real(&tiny, &Tolerances::default()).unwrap().variances[2], 0.0);
    }

    #[test]
    fn directional_variances() {
        let (s, ops) = ket(2, 2);
        let p = covariance_pair(&s, &ops).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus = Vector3::new(c(r, 0.0), c(0.0, r), c(0.0, 0.0));
        assert!(p.variance_along(&plus).unwrap().abs() < 1e-12);
        assert!((p.variance_along_real(&Vector3::x()).unwrap() - 0.5).abs() < 1e-12);
        assert!(matches!(p.variance_along_real(&Vector3::new(1.0, 1.0, 0.0)), Err(Error::NotUnitVector(_))));
        let x = Vector3::<f64>::x().map(C64::from);
        let y = Vector3::<f64>::y().map(C64::from);
        assert!(p.correlation(&x, &y).unwrap().norm() < 1e-12);
        // <j_v^dag j_u> - <j_v^dag><j_u> = v^dag M~ u: (u, v) = (y, x) is <j1 j2> = i m / 2.
        let h = CovarianceKind::ComplexHermitian;
        assert!((p.correlation_with(h, &y, &x).unwrap() - c(0.0, 0.5)).norm() < 1e-12);
        assert!((p.correlation_with(h, &x, &y).unwrap() - c(0.0, -0.5)).norm() < 1e-12);
        assert!((p.correlation_with(h, &x, &x).unwrap() - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn longitudinal_frames() {
        let f = longitudinal_frame(&Vector3::new(0.0, 0.0, 0.7), 1e-8).unwrap();
        assert_eq!(f[0], Vector3::x());
        assert_eq!(f[1], Vector3::y());
        assert_eq!(f[2], Vector3::z());
        assert!(matches!(longitudinal_frame(&Vector3::zeros(), 1e-8), Err(Error::VanishingMean(_))));
        let g = longitudinal_frame(&Vector3::new(0.3, -1.2, 0.5), 1e-8).unwrap();
        assert!((g[0].cross(&g[1]) - g[2]).norm() < 1e-15);
        assert!(g[0].dot(&g[2]).abs() < 1e-15);
    }

    #[test]
    fn parity_of_basis_state() {
        let (s, ops) = ket(4, 2);
        let check = parity_principal_check(&s, &ops, &Vector3::z()).unwrap();
        assert!(check.symmetric && check.axis_principal);
        assert!(check.residuals.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn mismatched_basis_rejected() {
        let (s, _) = ket(2, 0);
        let ops = spin_operators(HalfInteger::from_twice(3)).unwrap();
        assert!(matches!(covariance_pair(&s, &ops), Err(Error::BasisMismatch { .. })));
    }
}
