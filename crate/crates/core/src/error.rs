use std::io;

use thiserror::Error;

/// Errors produced by sieving, table I/O and the statistics built on top.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("memory budget exceeded: need {needed} bytes, budget is {budget} bytes")]
    Resource { needed: u64, budget: u64 },

    #[error("n = {n} is outside the covered interval [{first}, {last}]")]
    OutOfRange { n: u64, first: u64, last: u64 },

    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("format error: {0}")]
    Format(String),

    #[error("corrupt table: expected {expected} payload bytes, found {actual}")]
    Truncated { expected: u64, actual: u64 },

    #[error("corrupt table: {0}")]
    Corrupt(String),

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("degenerate normalizer: {0}")]
    DegenerateNormalizer(String),

    #[error("degenerate marginal: {0}")]
    DegenerateMarginal(String),

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn arg(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    /// True for the statistic-level failures (zero marginals, zero normalizers,
    /// undefined ratios and regressions).
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateNormalizer(_)
                | Error::DegenerateMarginal(_)
                | Error::UndefinedRatio(_)
                | Error::InsufficientData(_)
                | Error::DegenerateData(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
