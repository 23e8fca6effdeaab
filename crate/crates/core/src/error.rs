use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base must lie in 2..=255, got {0}")]
    InvalidBase(usize),
    #[error("base mismatch between operands")]
    BaseMismatch,
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("not a standard partition: {0}")]
    NotStandardPartition(String),
    #[error("enumeration would produce {requested} items, cap is {cap}")]
    EnumerationCap { cap: usize, requested: String },
    #[error("leaf index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("element is not valid for this system: {0}")]
    InvalidElement(String),
    #[error("system mismatch: {0}")]
    SystemMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("leaf count {count} exceeds the configured limit {limit}")]
    LevelOverflow { count: usize, limit: usize },
    #[error("invalid map: {0}")]
    InvalidMap(String),
}

impl Error {
    pub fn parse(offset: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            offset,
            msg: msg.into(),
        }
    }

    /// Shifts the byte offset of a parse error, for errors raised on a substring.
    pub fn at_offset(self, base: usize) -> Error {
        match self {
            Error::Parse { offset, msg } => Error::Parse {
                offset: offset + base,
                msg,
            },
            other => other,
        }
    }
}
