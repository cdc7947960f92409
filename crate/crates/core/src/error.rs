use thiserror::Error;

/// Errors raised anywhere in the pipeline. The CLI maps them onto exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mismatched fields: Q(zeta_{0}) vs Q(zeta_{1})")]
    FieldMismatch(u32, u32),
    #[error("field Q(zeta_{m}) is too small: {need}")]
    FieldTooSmall { m: u32, need: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
