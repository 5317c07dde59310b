//! Exit-code contract: 0 ok, 1 verification failure, 2 bad input,
//! 3 state invariant violated, 4 internal or theorem violation.

use std::fmt;

use spinvar_core::Error;

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_STATE: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }

    pub fn state(message: impl Into<String>) -> Self {
        Failure { code: EXIT_STATE, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INTERNAL, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidHalfInteger(_)
            | Error::InvalidProjection { .. }
            | Error::SpinTooLarge { .. }
            | Error::DegenerateDirection
            | Error::NotUnitVector(_)
            | Error::BasisMismatch { .. }
            | Error::DimensionMismatch { .. }
            | Error::NonOrthogonal(_)
            | Error::NoSqueezedState { .. }
            | Error::InvalidParameter(_)
            | Error::TrivialRepresentation => EXIT_INPUT,
            Error::InvalidState(_) | Error::NotUnitary(_) => EXIT_STATE,
            Error::NotARotation(_)
            | Error::VanishingMean(_)
            | Error::NoPhaseSensitivity
            | Error::InternalConsistency(_)
            | Error::TheoremViolation { .. } => EXIT_INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}
