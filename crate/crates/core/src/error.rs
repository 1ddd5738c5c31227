//! Error type shared by the whole crate.

/// Errors reported by constructors, evaluators and checks.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input violates a documented precondition or type invariant.
    #[error("validation: {0}")]
    Validation(String),

    /// A value would overflow or leave the representable range.
    #[error("range: {0}")]
    Range(String),

    /// No torus realization could be produced for the given frequency.
    #[error("realization: {0}")]
    Realization(String),

    /// Polynomial and group were built over different frequencies.
    #[error("frequency mismatch: {0}")]
    FrequencyMismatch(String),

    /// Term index outside the frequency prefix.
    #[error("index {index} out of range for prefix of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    /// Quadrature grid too coarse for the fastest oscillation present.
    #[error("resolution: {0}")]
    Resolution(String),

    /// Requested tolerance cannot be met by the admissible truncation.
    #[error("tolerance infeasible: {0}")]
    ToleranceInfeasible(String),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),

    /// Coefficient prefix too short for the requested operation.
    #[error("insufficient prefix: {0}")]
    InsufficientPrefix(String),

    /// Serialized input could not be parsed.
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
