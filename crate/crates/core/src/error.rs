use thiserror::Error;

/// Errors produced by the statistics, estimation and testing routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("series too short: need at least {required} observations, got {actual}")]
    TooShort { required: usize, actual: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("index `{name}` = {value} outside admissible range [{min}, {max}]")]
    IndexOutOfRange {
        name: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("series has zero variance; autocorrelation is undefined")]
    ConstantSeries,

    #[error("sum of squares before split {split} is zero; variance ratio undefined")]
    ZeroDenominator { split: usize },

    #[error("no admissible split produced a finite variance ratio")]
    NoValidCandidate,

    #[error("both segments are constant after squaring; reference segment is undefined")]
    DegenerateSegments,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
