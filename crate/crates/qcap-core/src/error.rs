use thiserror::Error;

/// Errors raised by channel constructors, numerical routines and bound
/// evaluators.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or channel dimensions do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A hard size cap (qubit count, matrix dimension) was exceeded.
    #[error("size cap exceeded: {0}")]
    Size(String),

    /// A constructor argument violates its constraints (normalization,
    /// probability bounds, ...).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Parameters lie outside the degradable regime where the requested
    /// quantity is meaningful.
    #[error("outside degradable regime: {0}")]
    Regime(String),

    /// A derived object (e.g. the degrading map) failed its own validity
    /// check even though the input parameters were accepted.
    #[error("consistency failure: {0}")]
    Consistency(String),

    /// A numerical precondition (hermiticity, density-matrix property) does
    /// not hold on the actual input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Scalar argument outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative numerical method failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
