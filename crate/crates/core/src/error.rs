use thiserror::Error;

use crate::lattice::IntPoint;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("a lattice point needs at least one coordinate")]
    EmptyPoint,

    #[error("interval [{lo},{hi}] is trivial or reversed; need lo < hi")]
    InvalidInterval { lo: i64, hi: i64 },

    #[error("a box domain needs at least one axis")]
    EmptyBox,

    #[error("explicit set is empty")]
    EmptySet,

    #[error("duplicate point {0} in explicit set")]
    DuplicatePoint(IntPoint),

    #[error("point {0} lies outside the domain")]
    OutOfDomain(IntPoint),

    #[error("domain is not closed under midpoints: {x} and {y} have a midpoint outside it")]
    NotAmesoSet { x: IntPoint, y: IntPoint },

    #[error("{what} exceeds the configured cap of {cap} (needed {needed})")]
    CapExceeded {
        what: &'static str,
        cap: u64,
        needed: u64,
    },

    #[error("objective returned a non-finite value at {0}")]
    NonFinite(IntPoint),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
