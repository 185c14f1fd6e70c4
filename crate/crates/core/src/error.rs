use thiserror::Error;

use crate::funcmodel::Domain;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value for `{0}`")]
    NonFinite(&'static str),

    #[error("`{name}` out of range: {detail}")]
    OutOfRange { name: &'static str, detail: String },

    #[error("index `{0}` must be positive")]
    ZeroIndex(&'static str),

    #[error("argument outside the function domain: {0}")]
    DomainError(String),

    #[error("domain mismatch: expected {expected:?}, found {found:?}")]
    DomainMismatch { expected: Domain, found: Domain },

    #[error("{what} index {index} out of range (0..{len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("insufficient resolution: {0}")]
    ResolutionError(String),

    #[error("gram matrix numerically singular (condition {condition:e})")]
    SingularGram { condition: f64 },

    #[error("invalid sampled table: {0}")]
    Table(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
