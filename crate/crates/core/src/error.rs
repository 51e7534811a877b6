use thiserror::Error;

use crate::group::GroupValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range for order {order} (indices are 1-based)", index = .index + 1)]
    IndexOutOfRange { index: usize, order: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("table is not a group: {0}")]
    Validation(GroupValidationReport),

    #[error("operands belong to different groups")]
    GroupMismatch,

    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("not doubly stochastic: {0}")]
    NotStochastic(String),

    #[error("cell ({i}, {j}) is hit by {count} left translations, expected exactly one", i = .row + 1, j = .col + 1)]
    Multiplicity { row: usize, col: usize, count: usize },

    #[error("matrix is not a convolution matrix: {0}")]
    NotConvolutionMatrix(String),

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("rational entry exceeds {cap} bits; switch to the float pipeline")]
    ResourceGuard { cap: u64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("walk did not reach tolerance {epsilon} within {max_steps} steps")]
    NotConverged { epsilon: f64, max_steps: u64 },
}
