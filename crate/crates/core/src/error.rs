use thiserror::Error;

use crate::fit::FitStatus;

pub type Result<T> = std::result::Result<T, Error>;

/// Which of the two models in a nested comparison failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NestedModel {
    Reduced,
    Full,
}

impl std::fmt::Display for NestedModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NestedModel::Reduced => f.write_str("reduced"),
            NestedModel::Full => f.write_str("full"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("label at row {row} is {value}, expected 0 or 1")]
    InvalidLabel { row: usize, value: f64 },
    #[error("first design column must be all ones (row {row} has {value})")]
    MissingIntercept { row: usize, value: f64 },
    #[error("invalid column selection: {0}")]
    InvalidSelection(String),
    #[error("{model} model fit did not converge (status {status:?})")]
    NonConvergence {
        model: NestedModel,
        status: FitStatus,
    },
}
