use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("non-finite value")]
    NonFinite,
    #[error("empty subset")]
    EmptySubset,
    #[error("bad feature index: {0}")]
    BadFeatureIndex(usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported version: {0}")]
    UnsupportedVersion(u64),
    #[error("validation data required")]
    ValidationRequired,
    #[error("degenerate target: effects undefined")]
    DegenerateTarget,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("unknown column: {0}")]
    UnknownColumn(String),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("split too small")]
    SplitTooSmall,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dims(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
