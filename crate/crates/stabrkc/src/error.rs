//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Stage counts below 2 are not defined for the RKC family.
    #[error("invalid stage count s = {s} (must satisfy 2 <= s <= {max})", max = crate::chebyshev::MAX_STAGES)]
    InvalidStageCount { s: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A stage produced a non-finite value; `stage` counts computed stages
    /// within the step in evaluation order.
    #[error("non-finite state detected at stage {stage}")]
    NonFiniteState { stage: usize },

    #[error("step size underflow at t = {t} (h = {h:e} < h_min = {h_min:e})")]
    StepSizeUnderflow { t: f64, h: f64, h_min: f64 },

    #[error("aborting after {count} consecutive failed step attempts at t = {t}")]
    TooManyFailures { t: f64, count: usize },

    #[error("reference solution not available for key `{0}` and --no-compute-ref is set")]
    MissingReference(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
