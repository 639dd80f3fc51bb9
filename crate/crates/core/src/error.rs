use thiserror::Error;

/// Errors raised across the library. The CLI maps each variant onto an exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("negative argument {0} where a nonnegative integer is required")]
    NegativeArgument(i64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("invalid truncation: s = {s} but the cascade has t = {t}")]
    InvalidTruncation { s: usize, t: usize },
    #[error("family size {0} is not a binomial coefficient C(a, {1})")]
    NonBinomialSize(usize, usize),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("undecidable at tolerance: {0}")]
    Undecidable(String),
    #[error("tail not certified: {0}")]
    TailUncertified(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
