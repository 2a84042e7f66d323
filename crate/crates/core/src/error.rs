use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("timestamp {got} us precedes previous timestamp {previous} us")]
    NonMonotonicTime { previous: u64, got: u64 },
}

impl Error {
    pub(crate) fn range(what: &'static str, value: impl Into<f64>) -> Self {
        Error::OutOfRange {
            what,
            value: value.into(),
        }
    }
}
