use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("ring is not known to be equidimensional: {0}")]
    NotEquidimensional(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("primality undecided: {0}")]
    PrimalityUndecided(String),

    #[error("builder invariant violation: {0}")]
    BuilderInvariant(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("structural error at {path}: {msg}")]
    Structure { path: String, msg: String },

    #[error("operation cancelled")]
    Cancelled,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    /// Exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SearchExhausted(_) | Error::PrimalityUndecided(_) => 3,
            Error::Usage(_)
            | Error::RingMismatch(_)
            | Error::NotEquidimensional(_)
            | Error::Parse { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
