use thiserror::Error;

use crate::schedfmt::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// An eigenvalue sits too close to -1 for the principal logarithm to be
    /// well defined.
    #[error("eigenvalue phase {phase:.9} is within {guard:e} rad of the branch cut; reduce the cycle time")]
    BranchCut { phase: f64, guard: f64 },

    #[error("group is not closed: {0}")]
    Closure(String),

    #[error("invalid group structure: {0}")]
    Structure(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("Lie closure exceeded max_dim {max_dim} (partial dimension {partial_dim})")]
    Resource { max_dim: usize, partial_dim: usize },

    #[error("synchronization error: {0}")]
    Synchronization(String),

    #[error("numerical integrity error: {0}")]
    NumericalIntegrity(String),

    #[error("bounds error: {0}")]
    Bounds(String),

    #[error("{0}")]
    Parse(Diagnostic),

    #[error("program rejected with {} diagnostic(s); first: {}", .0.len(), .0.first().map(|d| d.to_string()).unwrap_or_default())]
    Invalid(Vec<Diagnostic>),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
