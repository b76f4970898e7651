use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An oracle declared monotone returned values that contradict its
    /// direction. `at` and `against` are the two witnesses.
    #[error(
        "monotonicity violation: phi({at}) and phi({against}) contradict the declared direction"
    )]
    MonotonicityViolation { at: i64, against: i64 },

    #[error("instance too large: {what} ({size} exceeds cap {cap})")]
    TooLarge {
        what: &'static str,
        size: u128,
        cap: u128,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
