use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe mismatch: expected {expected}, found {found}")]
    UniverseMismatch { expected: String, found: String },
    #[error("bornology mismatch: {0}")]
    BornologyMismatch(String),
    #[error("element {elem} is not in universe {universe}")]
    NotInUniverse { elem: String, universe: String },
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
    #[error("family is not summable: {0}")]
    NotSummable(String),
    #[error("zero to window: no nonzero coefficient among the first {0} support candidates")]
    ZeroToWindow(usize),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("field mismatch: {0}")]
    Field(String),
}

pub type Result<T> = std::result::Result<T, Error>;
