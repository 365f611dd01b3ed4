use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, got {actual}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("index {index} out of range for dimension {bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("empty matrix or support in {0}")]
    Empty(&'static str),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("infeasible structure: {0}")]
    Infeasible(String),
    #[error("signal has zero norm; SNR is undefined")]
    ZeroSignal,
    #[error("unknown {kind} '{name}'; valid: {valid}")]
    UnknownName {
        kind: &'static str,
        name: String,
        valid: String,
    },
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn mismatch(op: &'static str, expected: usize, actual: usize) -> Self {
        Error::DimensionMismatch {
            op,
            expected,
            actual,
        }
    }
}
