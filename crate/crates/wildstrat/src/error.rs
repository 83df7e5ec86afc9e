use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent input (bad type name, wrong lengths, unknown roots).
    #[error("validation error: {0}")]
    Validation(String),
    /// Two operands built over different root data or truncation depths.
    #[error("mismatch: {0}")]
    Mismatch(String),
    /// A formal type that does not vanish on the required coroots.
    #[error("inadmissible formal type: {0}")]
    Inadmissible(String),
    /// A precondition of an operation is not met by otherwise valid input.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A structural claim that the computation was expected to confirm failed.
    #[error("claim violation: {0}")]
    ClaimViolation(String),
    /// Failure while parsing a rational number or a configuration value.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
