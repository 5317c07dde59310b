use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid half-integer: {0}")]
    InvalidHalfInteger(String),

    #[error("m = {two_m}/2 is not a valid projection for j = {two_j}/2")]
    InvalidProjection { two_j: i32, two_m: i32 },

    #[error("spin 2j = {two_j} exceeds the configured cap 2j <= {max}")]
    SpinTooLarge { two_j: i32, max: i32 },

    #[error("degenerate direction")]
    DegenerateDirection,

    #[error("axis is not a unit vector (|u| - 1 = {0:e})")]
    NotUnitVector(f64),

    #[error("basis mismatch: expected 2j = {expected}, found 2j = {found}")]
    BasisMismatch { expected: i32, found: i32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("operator is not unitary (max |U^dag U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("trivial representation")]
    TrivialRepresentation,

    #[error("unitary does not act as a proper rotation: {0}")]
    NotARotation(String),

    #[error("mean angular momentum vanishes; longitudinal frame undefined (|<j>| = {0:e})")]
    VanishingMean(f64),

    #[error("directions are not orthogonal (|u^dag v| = {0:e})")]
    NonOrthogonal(f64),

    #[error("no phase sensitivity")]
    NoPhaseSensitivity,

    #[error("no exact squeezed state in this irrep (2j = {two_j}, xi = {xi}, smallest singular value {sigma:e})")]
    NoSqueezedState { two_j: i32, xi: f64, sigma: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    #[error("uncertainty relation `{name}` violated (slack {slack:e})")]
    TheoremViolation { name: String, slack: f64 },
}
