//! Central tolerance record.
//!
//! Every numerical threshold in the crate is read from a [`Tolerances`]
//! value. The defaults are the ones the test suites are written against.

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative Hermiticity tolerance for operators and density matrices.
    pub hermitian: f64,
    /// Elementwise tolerance for commutator and Casimir identities.
    pub algebra: f64,
    /// Norm of pure states and trace of density matrices.
    pub normalization: f64,
    /// Smallest admissible eigenvalue of a density matrix is `-state_psd`.
    pub state_psd: f64,
    /// `| |u| - 1 |` for rotation axes and projection directions.
    pub unit_vector: f64,
    /// `max |U^dag U - I|`.
    pub unitary: f64,
    /// Generator eigenvalues must match `-j..j` to this tolerance.
    pub generator_spectrum: f64,
    /// Orthogonality, properness and realness of derived rotations.
    pub rotation: f64,
    /// Covariance PSD slack; eigenvalues in `[-covariance_psd, 0)` clamp to 0.
    pub covariance_psd: f64,
    /// Structural identities of a covariance pair (symmetry, trace, relation).
    pub covariance: f64,
    /// Jacobi stops when the off-diagonal norm is below `jacobi * |A|`.
    pub jacobi: f64,
    /// Relative gap below which principal variances form one cluster.
    pub degeneracy: f64,
    /// A relation is satisfied when `lhs - rhs >= -slack`.
    pub slack: f64,
    /// `|<j>|` at or below this routes a state to the zero-mean analysis.
    pub mean: f64,
    /// Null-space acceptance: smallest singular value `<= null_space * |A|`.
    pub null_space: f64,
    /// `|U rho U^dag - rho|` threshold for the parity symmetry test.
    pub parity: f64,
    /// `|u^dag v|` threshold for orthogonal direction pairs.
    pub orthogonality: f64,
    /// Heisenberg scaling flag: largest principal variance `>= c * j^2`.
    pub heisenberg_fraction: f64,
    /// Largest accepted `2j`.
    pub max_two_j: i32,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian: 1e-10,
            algebra: 1e-10,
            normalization: 1e-8,
            state_psd: 1e-9,
            unit_vector: 1e-12,
            unitary: 1e-10,
            generator_spectrum: 1e-8,
            rotation: 1e-9,
            covariance_psd: 1e-9,
            covariance: 1e-9,
            jacobi: 1e-14,
            degeneracy: 1e-9,
            slack: 1e-9,
            mean: 1e-8,
            null_space: 1e-10,
            parity: 1e-9,
            orthogonality: 1e-10,
            heisenberg_fraction: 0.5,
            max_two_j: 200,
        }
    }
}

impl Tolerances {
    /// Applies `key=value` overrides separated by commas or whitespace,
    /// e.g. `"slack=1e-8, mean=1e-6"`. Keys are the field names.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self, Error> {
        for item in spec.split(|c: char| c == ',' || c.is_whitespace()) {
            if item.is_empty() {
                continue;
            }
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("tolerance override `{item}` is not key=value")))?;
            let bad = || Error::InvalidParameter(format!("tolerance `{key}`: cannot parse `{value}`"));
            if key == "max_two_j" {
                self.max_two_j = value.parse().map_err(|_| bad())?;
                continue;
            }
            let v: f64 = value.parse().map_err(|_| bad())?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(bad());
            }
            let slot = match key {
                "hermitian" => &mut self.hermitian,
                "algebra" => &mut self.algebra,
                "normalization" => &mut self.normalization,
                "state_psd" => &mut self.state_psd,
                "unit_vector" => &mut self.unit_vector,
                "unitary" => &mut self.unitary,
                "generator_spectrum" => &mut self.generator_spectrum,
                "rotation" => &mut self.rotation,
                "covariance_psd" => &mut self.covariance_psd,
                "covariance" => &mut self.covariance,
                "jacobi" => &mut self.jacobi,
                "degeneracy" => &mut self.degeneracy,
                "slack" => &mut self.slack,
                "mean" => &mut self.mean,
                "null_space" => &mut self.null_space,
                "parity" => &mut self.parity,
                "orthogonality" => &mut self.orthogonality,
                "heisenberg_fraction" => &mut self.heisenberg_fraction,
                _ => return Err(Error::InvalidParameter(format!("unknown tolerance `{key}`"))),
            };
            *slot = v;
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_apply() {
        let t = Tolerances::default().with_overrides("slack=1e-8, mean=2e-6 max_two_j=40").unwrap();
        assert_eq!(t.slack, 1e-8);
        assert_eq!(t.mean, 2e-6);
        assert_eq!(t.max_two_j, 40);
        assert_eq!(t.hermitian, 1e-10);
    }

    #[test]
    fn overrides_reject_garbage() {
        assert!(Tolerances::default().with_overrides("nope=1").is_err());
        assert!(Tolerances::default().with_overrides("slack").is_err());
        assert!(Tolerances::default().with_overrides("slack=-1").is_err());
    }
}
