use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("field/grid mismatch: {0}")]
    GridMismatch(String),

    #[error("negative density {value:e} at node {index}")]
    NegativeDensity { index: usize, value: f64 },

    #[error("non-finite value at node {0}")]
    NonFinite(usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("density integrates to {integral} but N = {declared} was declared")]
    Normalization { integral: f64, declared: f64 },

    #[error("q cannot be identified: {0}")]
    Unidentifiable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
