use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid mismatch: expected N = {expected}, found N = {found}")]
    GridMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("numerical failure at t = {t}: {message}")]
    NumericalFailure { t: f64, message: String },

    #[error("quadrature not converged: Q-vs-2Q difference {difference:e} exceeds {tolerance:e}")]
    QuadratureNotConverged { difference: f64, tolerance: f64 },

    #[error("singular linear system")]
    Singular,

    #[error("negative entry {value:e} at index {index} (below {floor:e})")]
    NegativeEntry { index: usize, value: f64, floor: f64 },

    #[error("{0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
