use field_core::FieldError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("requested order {requested} exceeds the series truncation {available}")]
    TruncationExceeded { requested: usize, available: usize },

    #[error("averaging order {0} requires strict mode off (solvability is explicit only to order 2)")]
    ExperimentalOrder(usize),

    #[error("averaging order must be at least 1, got {0}")]
    BadOrder(usize),

    #[error(transparent)]
    Field(#[from] FieldError),
}

pub type EngineResult<T> = Result<T, EngineError>;
