use thiserror::Error;

use crate::elrdf::ElrdfResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input is empty")]
    EmptyInput,

    #[error("non-finite observation {0}")]
    NonFinite(f64),

    #[error("duplicate observation {0}")]
    DuplicateSample(f64),

    #[error("invalid step CDF: {0}")]
    InvalidStepCdf(String),

    #[error("band edges cross at {knot}: lower {lower} exceeds upper {upper}")]
    CrossedBand { knot: f64, lower: f64, upper: f64 },

    #[error("band admits no CDF consistent with the sample")]
    InfeasibleBand,

    #[error("solver hit the iteration cap ({}) before converging", .0.iterations)]
    MaxIterationsExceeded(Box<ElrdfResult>),

    #[error("null CDF decreases between {0} and {1}")]
    NonMonotoneCdf(f64, f64),

    #[error("moment target {target} lies outside the hull [{min}, {max}] of the sample moments")]
    InfeasibleMoment { target: f64, min: f64, max: f64 },

    #[error("sample variance is zero")]
    ZeroVariance,

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed input at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
