//! Error type shared across the library.

use thiserror::Error;

/// Failures raised by model construction, solvers and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operators act on different spaces")]
    SignatureMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unstable squeezed cavity: lambda = {0} must be below 1")]
    Unstable(f64),
    #[error("steady state is not unique or the solve failed: {0}")]
    NonUniqueSteadyState(String),
    #[error("density matrix violates {0}")]
    InvalidState(String),
    #[error("propagation failed: {0}")]
    Propagation(String),
    #[error("sensor population vanishes: {0}")]
    VanishingPopulation(String),
    #[error("sensor coupling too strong: epsilon-halving ratio {ratio:e} exceeds {limit:e}")]
    EpsilonTooLarge { ratio: f64, limit: f64 },
    #[error("Fock truncation leakage {0:e} above threshold")]
    TruncationLeakage(f64),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Library result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for per-point conditions that a sweep records as missing.
    pub fn is_undefined_point(&self) -> bool {
        matches!(self, Error::VanishingPopulation(_))
    }
}
