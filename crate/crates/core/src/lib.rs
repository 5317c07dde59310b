//! # spinvar-core
//!
//! Fluctuations of spin-j angular momentum through principal components of
//! the 3x3 covariance matrix of `(j1, j2, j3)`.
//!
//! Two covariance matrices are built for every state:
//!
//! - the real symmetric `M`, from symmetrized second moments,
//! - the complex Hermitian `M~`, from raw second moments `<jk jl> - <jk><jl>`.
//!
//! Their eigenvalues (principal variances) are invariant under SU(2)
//! rotations of the state, and feed a set of uncertainty relations that stay
//! informative when the mean spin vanishes.
//!
//! ## Layout
//!
//! - [`half`]: exact half-integer quantum numbers.
//! - [`config`]: the central tolerance record.
//! - [`spin`]: operator matrices, states, SU(2) unitaries and rotations.
//! - [`jacobi`]: deterministic 3x3 eigensolvers.
//! - [`covariance`]: `M`, `M~` and their principal decompositions.
//! - [`uncertainty`]: relation checks and the phase-resolution bound.
//! - [`states`]: example state families and analytic reference matrices.

#![forbid(unsafe_code)]

pub mod config;
pub mod covariance;
pub mod error;
pub mod half;
pub mod jacobi;
pub mod spin;
pub mod states;
pub mod uncertainty;

pub use config::Tolerances;
pub use covariance::{
    covariance_pair, longitudinal_frame, parity_principal_check, CovarianceKind, CovariancePair,
    ParityCheck, PrincipalDecomposition,
};
pub use error::{Error, Result};
pub use half::HalfInteger;
pub use spin::{
    apply_unitary, component, expectation, mean_vector, rotation_from_unitary, spin_operators,
    spin_operators_with, su2_unitary, Operator, OperatorTriple, QuantumState, RotationSpec,
    SpinBasis,
};
pub use states::{
    basis_state, cat_state, coherent_state, ramp_state, random_state, reference_covariance_jm,
    schwinger_labels, squeezed_approx, squeezed_exact, RandomKind, SchwingerLabels, SqueezeParam,
};
pub use uncertainty::{analyze, Regime, RelationResult, UncertaintyReport};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Fully antisymmetric tensor with `eps(0, 1, 2) = 1` (zero-based indices).
#[inline]
pub fn levi_civita(k: usize, l: usize, n: usize) -> f64 {
    match (k, l, n) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}
