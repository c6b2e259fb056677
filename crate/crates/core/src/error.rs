use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape: {0}")]
    Shape(String),

    #[error("M-too-small: M = {given}, need at least {required}")]
    MTooSmall { given: i64, required: i64 },

    #[error("too-large: m + n = {0} exceeds the exhaustive search cap of 30")]
    TooLarge(usize),

    #[error("stale-state: {0}")]
    StaleState(&'static str),

    #[error("overflow: coefficient magnitude bound {0} exceeds 2^62")]
    Overflow(u128),

    #[error("line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("budget: {0}")]
    Budget(&'static str),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
