use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid root system {family}{rank}: {reason}")]
    InvalidRootSystem {
        family: String,
        rank: usize,
        reason: &'static str,
    },

    #[error("invalid parabolic specification: {0}")]
    InvalidParabolic(String),

    #[error("parabolics refer to different groups: {0} vs {1}")]
    GroupMismatch(String, String),

    #[error("empty root set has no minimal element")]
    EmptyRootSet,

    #[error("size cap exceeded: {0}")]
    CapExceeded(String),

    #[error("below recursion range: {0}")]
    BelowRange(String),

    #[error("unbounded region: coordinate {coordinate} is unbounded {direction}")]
    Unbounded {
        coordinate: usize,
        direction: &'static str,
    },

    #[error("infeasible region")]
    Infeasible,

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("invalid divisor data: {0}")]
    InvalidDivisorData(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An internal consistency check failed; always a bug or a bad input table.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
