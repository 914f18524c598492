use thiserror::Error;

/// Errors raised by the library. Budget exhaustion during a search is a
/// verdict, never an error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree mismatch: expected degree {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("operation is undefined for the zero form")]
    ZeroForm,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid simplex matrix: {0}")]
    InvalidMatrix(String),

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
