use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("magnetic field is zero: radius of curvature is infinite")]
    InfiniteRadius,

    #[error("geometry unsolvable for leg {leg}: {reason}")]
    GeometryUnsolvable { leg: &'static str, reason: String },

    #[error("internal consistency check failed in {operation}: {detail}")]
    Inconsistent {
        operation: &'static str,
        detail: String,
    },

    #[error("too few usable points for a fit: {usable} (need at least {required})")]
    TooFewPoints { usable: usize, required: usize },

    #[error("integration failed at t = {time:e} s: {reason}")]
    Integration { time: f64, reason: String },

    #[error("shooting failed: {0}")]
    Shooting(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
