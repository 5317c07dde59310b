//! Library side of the `spinvar` binary: state-file parsing, report
//! serialization, parameter scans and the verification suite.

pub mod failure;
pub mod input;
pub mod json;
pub mod report;
pub mod scan;
pub mod verify;

pub use failure::Failure;
