use thiserror::Error;

/// Errors surfaced by rule construction, integration and the experiments.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("point {x} lies outside the open interval (-1, 1)")]
    OutsideDomain { x: f64 },

    #[error("invalid weight specification: {0}")]
    InvalidWeight(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "integration budget exhausted: best estimate {value} with error bound \
         {error_estimate} above tolerance {tol}"
    )]
    Accuracy {
        value: f64,
        error_estimate: f64,
        tol: f64,
    },

    #[error("Stieltjes procedure lost positivity at beta[{index}] = {value}")]
    LostPositivity { index: usize, value: f64 },

    #[error("recurrence center alpha[{index}] = {value} escaped (-1, 1)")]
    AlphaOutOfRange { index: usize, value: f64 },

    #[error("tridiagonal QL did not converge for eigenvalue {index} within {sweeps} sweeps")]
    NoConvergence { index: usize, sweeps: usize },

    #[error("index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("internal consistency violation: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
