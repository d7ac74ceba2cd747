use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A matrix or vector has the wrong shape for the requested operation.
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    /// A numeric or configuration parameter is outside its allowed range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An input violates a documented precondition (non-Hermitian matrix,
    /// non-unitary coin, probability outside [0, 1], ...).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// The evolving state collapsed to (numerically) zero and cannot be
    /// renormalized; the hash aborts with this diagnosable failure.
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    /// Malformed user-level input (bad bitstring, mismatched lengths, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Too many trials of a statistical run failed; the run is unusable.
    #[error("trial failure rate exceeded 0.1%: {failed} of {trials} trials failed")]
    FailureRateExceeded { failed: u64, trials: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
