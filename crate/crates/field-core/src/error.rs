use thiserror::Error;

/// Errors produced while evaluating or composing vector fields.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state outside the field domain at t = {t}")]
    OutsideDomain { t: f64 },

    #[error("non-finite value produced at t = {t}")]
    NonFinite { t: f64 },

    #[error("field has no time derivative available ({what})")]
    MissingTimeDerivative { what: &'static str },

    #[error("periods disagree: {a} vs {b}")]
    PeriodMismatch { a: f64, b: f64 },

    #[error("invalid quadrature configuration: {reason}")]
    BadQuadrature { reason: String },
}

pub type FieldResult<T> = Result<T, FieldError>;
