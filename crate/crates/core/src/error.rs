use thiserror::Error;

/// Errors raised by the engine.
///
/// The CLI maps these onto process exit codes: input problems exit with 1,
/// budget refusals with 2 and oracle disagreements with 3.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),

    #[error("invalid coefficient: {0}")]
    InvalidCoefficient(String),

    #[error("invalid cochain: {0}")]
    InvalidCochain(String),

    #[error("invalid algebra model: {0}")]
    InvalidModel(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded(_) => 2,
            Error::OracleMismatch(_) => 3,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
