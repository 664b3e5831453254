use thiserror::Error;

use crate::corestats::Histogram;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("required column `{0}` is missing from the header")]
    MissingColumn(&'static str),

    #[error("row {row}: {cause}")]
    MalformedRow { row: usize, cause: String },

    #[error("dataset contains no valid rows")]
    EmptyDataset,

    #[error("input is not sorted in descending order (position {index})")]
    UnsortedInput { index: usize },

    #[error("h-index is zero; the core is empty")]
    EmptyCore,

    #[error("all values are equal; the binning range is degenerate")]
    DegenerateRange { histogram: Box<Histogram> },

    #[error("value {0} is not strictly positive")]
    NonPositiveValue(f64),

    #[error("sample is empty")]
    EmptySample,

    #[error("mean of the data is zero")]
    ZeroMean,

    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },

    #[error("sample size {0} is outside the supported range 3..=5000")]
    SampleSizeOutOfRange(usize),

    #[error("data are constant; the statistic is undefined")]
    ConstantData,

    #[error("zeta series diverges for s = {0}")]
    DivergentSeries(f64),

    #[error("tail is degenerate; no finite maximum-likelihood exponent")]
    DegenerateTail,

    #[error("value {value} lies below x_min = {x_min}")]
    BelowXmin { value: u64, x_min: u64 },

    #[error("no candidate x_min yields a usable fit")]
    NoViableCandidate,

    #[error("invalid exponent {0}; must be greater than 1")]
    InvalidAlpha(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("need at least 3 non-empty bins, got {0}")]
    TooFewBins(usize),

    #[error("regression response has zero variance")]
    ZeroVariance,

    #[error("bootstrap replica {replica} failed after {attempts} attempts")]
    ReplicaFailed { replica: usize, attempts: usize },

    #[error("sections `{first}` and `{second}` disagree: {detail}")]
    InconsistentSections {
        first: &'static str,
        second: &'static str,
        detail: String,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
