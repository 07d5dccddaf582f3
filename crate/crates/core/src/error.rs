use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("degenerate code: {0}")]
    DegenerateCode(String),
    #[error("capacity exceeded: {what} is {value}, cap is {cap}")]
    CapacityExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("received word is inconsistent with every codeword")]
    Inconsistent,
    #[error("crossing out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
