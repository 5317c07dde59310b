//! Spin-j operator algebra: matrices of `(j1, j2, j3)`, states, SU(2)
//! unitaries `exp(i theta u.j)` and the rotations they induce.
//!
//! Basis ordering is `m` descending: index 0 holds `m = +j`, so the raising
//! operator is strictly upper triangular.
//!
//! Rotation convention: for `U = exp(i theta u.j)` the induced matrix `R`
//! satisfies `U^dag j_k U = sum_l R[k][l] j_l`, and `R` is the active
//! right-handed rotation by `-theta` about `u`. Consequently
//! `rotation_from_unitary(U1 U2) = R1 R2`, and for any state
//! `<j>` of `U psi` equals `R <j>` of `psi`.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, Matrix3, SymmetricEigen, Vector3};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::half::HalfInteger;
use crate::{levi_civita, C64};

const I: C64 = C64::new(0.0, 1.0);

/// The `2j+1` dimensional space of a single irrep, ordered by descending `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinBasis {
    j: HalfInteger,
}

impl SpinBasis {
    pub fn new(j: HalfInteger) -> Result<Self> {
        if j.twice() < 0 {
            return Err(Error::InvalidHalfInteger(format!("spin must be non-negative, got {j}")));
        }
        Ok(SpinBasis { j })
    }

    pub fn j(&self) -> HalfInteger {
        self.j
    }

    pub fn dim(&self) -> usize {
        self.j.twice() as usize + 1
    }

    /// Projection `m` stored at `index`.
    pub fn m_at(&self, index: usize) -> HalfInteger {
        HalfInteger::from_twice(self.j.twice() - 2 * index as i32)
    }

    pub fn index_of(&self, m: HalfInteger) -> Result<usize> {
        if !m.is_projection_of(self.j) {
            return Err(Error::InvalidProjection { two_j: self.j.twice(), two_m: m.twice() });
        }
        Ok(((self.j.twice() - m.twice()) / 2) as usize)
    }

    /// All projections in basis order, `+j` first.
    pub fn projections(&self) -> impl Iterator<Item = HalfInteger> + '_ {
        (0..self.dim()).map(move |i| self.m_at(i))
    }

    fn check_same(&self, other: &SpinBasis) -> Result<()> {
        if self != other {
            return Err(Error::BasisMismatch { expected: self.j.twice(), found: other.j.twice() });
        }
        Ok(())
    }
}

/// A dense complex matrix acting on a [`SpinBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    basis: SpinBasis,
    matrix: DMatrix<C64>,
}

impl Operator {
    pub fn new(basis: SpinBasis, matrix: DMatrix<C64>) -> Result<Self> {
        let d = basis.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: matrix.nrows().max(matrix.ncols()) });
        }
        Ok(Operator { basis, matrix })
    }

    pub fn identity(basis: SpinBasis) -> Self {
        let d = basis.dim();
        Operator { basis, matrix: DMatrix::identity(d, d) }
    }

    pub fn zeros(basis: SpinBasis) -> Self {
        let d = basis.dim();
        Operator { basis, matrix: DMatrix::zeros(d, d) }
    }

    pub fn basis(&self) -> SpinBasis {
        self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn adjoint(&self) -> Operator {
        Operator { basis: self.basis, matrix: self.matrix.adjoint() }
    }

    pub fn scale(&self, factor: C64) -> Operator {
        Operator { basis: self.basis, matrix: &self.matrix * factor }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }

    /// `max|A - A^dag| / (1 + max|A|)`.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint())) / (1.0 + self.max_abs())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `max |U^dag U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.basis.dim();
        max_abs(&(self.matrix.adjoint() * &self.matrix - DMatrix::<C64>::identity(d, d)))
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        self * other - other * self
    }
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn mul(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.basis, rhs.basis, "operator basis mismatch");
        Operator { basis: self.basis, matrix: &self.matrix * &rhs.matrix }
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn add(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.basis, rhs.basis, "operator basis mismatch");
        Operator { basis: self.basis, matrix: &self.matrix + &rhs.matrix }
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn sub(self, rhs: &'a Operator) -> Operator {
        assert_eq!(self.basis, rhs.basis, "operator basis mismatch");
        Operator { basis: self.basis, matrix: &self.matrix - &rhs.matrix }
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        &self - &rhs
    }
}

/// `(j1, j2, j3)` on one irrep, together with the tolerances every
/// downstream computation on this irrep uses.
#[derive(Clone, Debug)]
pub struct OperatorTriple {
    basis: SpinBasis,
    ops: [Operator; 3],
    tol: Tolerances,
}

impl OperatorTriple {
    pub fn basis(&self) -> SpinBasis {
        self.basis
    }

    pub fn j(&self) -> HalfInteger {
        self.basis.j
    }

    pub fn tol(&self) -> &Tolerances {
        &self.tol
    }

    pub fn j1(&self) -> &Operator {
        &self.ops[0]
    }

    pub fn j2(&self) -> &Operator {
        &self.ops[1]
    }

    pub fn j3(&self) -> &Operator {
        &self.ops[2]
    }

    /// Zero-based component access.
    pub fn get(&self, k: usize) -> &Operator {
        &self.ops[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Operator> {
        self.ops.iter()
    }

    /// `j+ = j1 + i j2`.
    pub fn raising(&self) -> Operator {
        &self.ops[0] + &self.ops[1].scale(I)
    }

    /// `j- = j1 - i j2`.
    pub fn lowering(&self) -> Operator {
        &self.ops[0] - &self.ops[1].scale(I)
    }

    /// `max_{k,l} max|[jk, jl] - i sum_n eps_kln jn|`.
    pub fn commutator_residual(&self) -> f64 {
        commutator_residual(&self.ops, false)
    }

    /// `max|j1^2 + j2^2 + j3^2 - j(j+1) I|`.
    pub fn casimir_residual(&self) -> f64 {
        let sum = self.ops.iter().fold(Operator::zeros(self.basis), |acc, op| &acc + &(op * op));
        let target = Operator::identity(self.basis).scale(C64::from(self.j().casimir()));
        (sum - target).max_abs()
    }
}

/// Residual of `[A_k, A_l] = i sum_n eps_kln A_n` (or `A_n^dag` when
/// `adjoint` is set) over all ordered pairs.
pub fn commutator_residual(ops: &[Operator; 3], adjoint: bool) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..3 {
        for l in 0..3 {
            if k == l {
                continue;
            }
            let mut rhs = Operator::zeros(ops[k].basis());
            for (n, op) in ops.iter().enumerate() {
                let e = levi_civita(k, l, n);
                if e != 0.0 {
                    let term = if adjoint { op.adjoint() } else { op.clone() };
                    rhs = &rhs + &term.scale(I * e);
                }
            }
            worst = worst.max((ops[k].commutator(&ops[l]) - rhs).max_abs());
        }
    }
    worst
}

/// Spin-j matrices with default tolerances.
pub fn spin_operators(j: HalfInteger) -> Result<OperatorTriple> {
    spin_operators_with(j, Tolerances::default())
}

/// Builds `(j1, j2, j3)` from the ladder elements
/// `j+|j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>`.
pub fn spin_operators_with(j: HalfInteger, tol: Tolerances) -> Result<OperatorTriple> {
    let basis = SpinBasis::new(j)?;
    if j.twice() > tol.max_two_j {
        return Err(Error::SpinTooLarge { two_j: j.twice(), max: tol.max_two_j });
    }
    let d = basis.dim();
    let tj = j.twice() as i64;
    let mut jp = DMatrix::<C64>::zeros(d, d);
    let mut j3 = DMatrix::<C64>::zeros(d, d);
    for i in 0..d {
        let tm = basis.m_at(i).twice() as i64;
        j3[(i, i)] = C64::from(tm as f64 / 2.0);
        if i > 0 {
            // 4 (j(j+1) - m(m+1)) in integers
            let q = tj * (tj + 2) - tm * (tm + 2);
            jp[(i - 1, i)] = C64::from((q as f64).sqrt() / 2.0);
        }
    }
    let jm = jp.adjoint();
    let j1 = (&jp + &jm) * C64::from(0.5);
    let j2 = (&jp - &jm) * C64::new(0.0, -0.5);
    Ok(OperatorTriple {
        basis,
        ops: [
            Operator { basis, matrix: j1 },
            Operator { basis, matrix: j2 },
            Operator { basis, matrix: j3 },
        ],
        tol,
    })
}

/// `u1 j1 + u2 j2 + u3 j3` for a complex direction (not necessarily unit).
pub fn component(ops: &OperatorTriple, u: &Vector3<C64>) -> Result<Operator> {
    if u.iter().all(|z| *z == C64::from(0.0)) {
        return Err(Error::DegenerateDirection);
    }
    let mut acc = Operator::zeros(ops.basis);
    for k in 0..3 {
        if u[k] != C64::from(0.0) {
            acc = &acc + &ops.ops[k].scale(u[k]);
        }
    }
    Ok(acc)
}

/// Real-direction convenience wrapper around [`component`].
pub fn component_real(ops: &OperatorTriple, u: &Vector3<f64>) -> Result<Operator> {
    component(ops, &u.map(C64::from))
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateRepr {
    Pure(DVector<C64>),
    Density(DMatrix<C64>),
}

/// A pure amplitude vector or a density matrix on one irrep.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    basis: SpinBasis,
    repr: StateRepr,
}

impl QuantumState {
    /// Validates `sum |a|^2 = 1` within `tol.normalization`.
    pub fn pure(basis: SpinBasis, amplitudes: DVector<C64>, tol: &Tolerances) -> Result<Self> {
        check_len(basis, amplitudes.len())?;
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm2 = amplitudes.norm_squared();
        if (norm2 - 1.0).abs() > tol.normalization {
            return Err(Error::InvalidState(format!("pure state norm^2 = {norm2} differs from 1")));
        }
        Ok(QuantumState { basis, repr: StateRepr::Pure(amplitudes) })
    }

    /// Normalizes the amplitudes; fails only for a zero or non-finite vector.
    pub fn pure_normalized(basis: SpinBasis, amplitudes: DVector<C64>) -> Result<Self> {
        check_len(basis, amplitudes.len())?;
        let n = amplitudes.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidState("amplitude vector has zero or non-finite norm".into()));
        }
        Ok(QuantumState { basis, repr: StateRepr::Pure(amplitudes / C64::from(n)) })
    }

    /// Validates Hermiticity, unit trace and positivity.
    pub fn density(basis: SpinBasis, rho: DMatrix<C64>, tol: &Tolerances) -> Result<Self> {
        let d = basis.dim();
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: rho.nrows().max(rho.ncols()) });
        }
        if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite density matrix entry".into()));
        }
        let defect = max_abs(&(&rho - rho.adjoint())) / (1.0 + max_abs(&rho));
        if defect > tol.hermitian {
            return Err(Error::InvalidState(format!("density matrix not Hermitian (defect {defect:e})")));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > tol.normalization || tr.im.abs() > tol.normalization {
            return Err(Error::InvalidState(format!("density matrix trace {tr} differs from 1")));
        }
        let herm = (&rho + rho.adjoint()) * C64::from(0.5);
        let min_eig = SymmetricEigen::new(herm.clone()).eigenvalues.min();
        if min_eig < -tol.state_psd {
            return Err(Error::InvalidState(format!("density matrix has negative eigenvalue {min_eig:e}")));
        }
        Ok(QuantumState { basis, repr: StateRepr::Density(herm) })
    }

    pub fn basis(&self) -> SpinBasis {
        self.basis
    }

    pub fn repr(&self) -> &StateRepr {
        &self.repr
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.repr, StateRepr::Pure(_))
    }

    pub fn amplitudes(&self) -> Option<&DVector<C64>> {
        match &self.repr {
            StateRepr::Pure(v) => Some(v),
            StateRepr::Density(_) => None,
        }
    }

    /// `|psi><psi|` for pure states, `rho` otherwise.
    pub fn density_matrix(&self) -> DMatrix<C64> {
        match &self.repr {
            StateRepr::Pure(v) => v * v.adjoint(),
            StateRepr::Density(m) => m.clone(),
        }
    }

    /// `|psi|^2` or `tr rho`.
    pub fn weight(&self) -> f64 {
        match &self.repr {
            StateRepr::Pure(v) => v.norm_squared(),
            StateRepr::Density(m) => m.trace().re,
        }
    }

    /// Rotates a pure state so that its first amplitude above
    /// `1e-12 * max|a|` is real and non-negative. Density matrices are
    /// returned unchanged.
    pub fn with_phase_convention(self) -> Self {
        match self.repr {
            StateRepr::Pure(mut v) => {
                let biggest = v.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
                if let Some(first) = v.iter().find(|z| z.norm() > 1e-12 * biggest).copied() {
                    let phase = first.conj() / first.norm();
                    v *= phase;
                }
                QuantumState { basis: self.basis, repr: StateRepr::Pure(v) }
            }
            other => QuantumState { basis: self.basis, repr: other },
        }
    }

    /// `|<self|other>|^2` for pure states, `tr(rho sigma)` in general.
    pub fn overlap(&self, other: &QuantumState) -> Result<f64> {
        self.basis.check_same(&other.basis)?;
        Ok(match (&self.repr, &other.repr) {
            (StateRepr::Pure(a), StateRepr::Pure(b)) => a.dotc(b).norm_sqr(),
            _ => trace_product(&self.density_matrix(), &other.density_matrix()).re,
        })
    }
}

fn check_len(basis: SpinBasis, len: usize) -> Result<()> {
    if len != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: len });
    }
    Ok(())
}

/// `tr(A B)` without forming the product.
pub(crate) fn trace_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    let d = a.nrows();
    let mut acc = C64::from(0.0);
    for r in 0..d {
        for c in 0..d {
            acc += a[(r, c)] * b[(c, r)];
        }
    }
    acc
}

/// `<psi|op|psi>` or `tr(rho op)`.
pub fn expectation(state: &QuantumState, op: &Operator) -> Result<C64> {
    state.basis.check_same(&op.basis)?;
    Ok(match &state.repr {
        StateRepr::Pure(v) => v.dotc(&(&op.matrix * v)),
        StateRepr::Density(rho) => trace_product(rho, &op.matrix),
    })
}

/// `(<j1>, <j2>, <j3>)`; fails if any imaginary part exceeds `tol.hermitian`.
pub fn mean_vector(state: &QuantumState, ops: &OperatorTriple) -> Result<Vector3<f64>> {
    let mut out = Vector3::zeros();
    for k in 0..3 {
        let z = expectation(state, &ops.ops[k])?;
        if z.im.abs() > ops.tol.hermitian {
            return Err(Error::InternalConsistency(format!("<j{}> has imaginary part {:e}", k + 1, z.im)));
        }
        out[k] = z.re;
    }
    Ok(out)
}

/// Angle and real unit axis of `U = exp(i theta u.j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationSpec {
    theta: f64,
    axis: Vector3<f64>,
}

impl RotationSpec {
    /// Requires `| |axis| - 1 | <= 1e-12`.
    pub fn new(theta: f64, axis: Vector3<f64>) -> Result<Self> {
        Self::new_with(theta, axis, &Tolerances::default())
    }

    pub fn new_with(theta: f64, axis: Vector3<f64>, tol: &Tolerances) -> Result<Self> {
        if !theta.is_finite() || axis.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("rotation angle and axis must be finite".into()));
        }
        let dev = axis.norm() - 1.0;
        if dev.abs() > tol.unit_vector {
            return Err(Error::NotUnitVector(dev));
        }
        Ok(RotationSpec { theta, axis })
    }

    /// Normalizes `axis` first.
    pub fn about(theta: f64, axis: Vector3<f64>) -> Result<Self> {
        let n = axis.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::DegenerateDirection);
        }
        RotationSpec::new(theta, axis / n)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn axis(&self) -> &Vector3<f64> {
        &self.axis
    }

    /// Active right-handed rotation by `angle` about this axis (Rodrigues).
    pub fn axis_angle_matrix(axis: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
        let (s, c) = angle.sin_cos();
        let k = Matrix3::new(0.0, -axis.z, axis.y, axis.z, 0.0, -axis.x, -axis.y, axis.x, 0.0);
        Matrix3::identity() + k * s + k * k * (1.0 - c)
    }
}

/// `exp(i theta u.j)` through the spectral decomposition of `u.j`.
///
/// The generator eigenvalues are checked against `{-j, ..., j}` and the
/// exact values are used in the exponent.
pub fn su2_unitary(ops: &OperatorTriple, spec: &RotationSpec) -> Result<Operator> {
    let generator = component_real(ops, &spec.axis)?;
    let herm = (&generator.matrix + generator.matrix.adjoint()) * C64::from(0.5);
    let eig = SymmetricEigen::new(herm);
    let d = ops.basis.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut phased = DMatrix::<C64>::zeros(d, d);
    for (slot, &col) in order.iter().enumerate() {
        let m = ops.basis.m_at(slot).value();
        let got = eig.eigenvalues[col];
        if (got - m).abs() > ops.tol.generator_spectrum {
            return Err(Error::InternalConsistency(format!(
                "generator eigenvalue {got} does not match m = {m}"
            )));
        }
        let phase = C64::from_polar(1.0, spec.theta * m);
        phased.set_column(slot, &(eig.eigenvectors.column(col) * phase));
    }
    let mut vecs = DMatrix::<C64>::zeros(d, d);
    for (slot, &col) in order.iter().enumerate() {
        vecs.set_column(slot, &eig.eigenvectors.column(col));
    }
    let u = Operator { basis: ops.basis, matrix: phased * vecs.adjoint() };
    let defect = u.unitarity_defect();
    if defect > ops.tol.unitary {
        return Err(Error::NotUnitary(defect));
    }
    Ok(u)
}

/// The rotation `R` with `U^dag j_k U = sum_l R[k][l] j_l`, extracted by
/// trace projection `R_kl = tr(U^dag j_k U j_l) / tr(j_l^2)`.
pub fn rotation_from_unitary(ops: &OperatorTriple, u: &Operator) -> Result<Matrix3<f64>> {
    ops.basis.check_same(&u.basis)?;
    if ops.j().twice() == 0 {
        return Err(Error::TrivialRepresentation);
    }
    let defect = u.unitarity_defect();
    if defect > ops.tol.unitary {
        return Err(Error::NotUnitary(defect));
    }
    let j = ops.j().value();
    let norm = j * (j + 1.0) * (2.0 * j + 1.0) / 3.0;
    let tol = ops.tol.rotation;
    let mut r = Matrix3::zeros();
    for k in 0..3 {
        let transformed = u.matrix.adjoint() * &ops.ops[k].matrix * &u.matrix;
        for l in 0..3 {
            let z = trace_product(&transformed, &ops.ops[l].matrix) / norm;
            if z.im.abs() > tol {
                return Err(Error::NotARotation(format!("trace ({k},{l}) has imaginary part {:e}", z.im)));
            }
            r[(k, l)] = z.re;
        }
    }
    let orth = (r.transpose() * r - Matrix3::identity()).abs().max();
    if orth > tol {
        return Err(Error::NotARotation(format!("R^t R deviates from I by {orth:e}")));
    }
    let det = r.determinant();
    if (det - 1.0).abs() > tol {
        return Err(Error::NotARotation(format!("det R = {det}")));
    }
    Ok(r)
}

/// `U|psi>` or `U rho U^dag`.
pub fn apply_unitary(state: &QuantumState, u: &Operator) -> Result<QuantumState> {
    state.basis.check_same(&u.basis)?;
    let defect = u.unitarity_defect();
    if defect > Tolerances::default().unitary {
        return Err(Error::NotUnitary(defect));
    }
    let repr = match &state.repr {
        StateRepr::Pure(v) => StateRepr::Pure(&u.matrix * v),
        StateRepr::Density(rho) => StateRepr::Density(&u.matrix * rho * u.matrix.adjoint()),
    };
    Ok(QuantumState { basis: state.basis, repr })
}
