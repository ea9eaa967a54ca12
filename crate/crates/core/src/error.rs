use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series needs at least 2 observations, got {len}")]
    EmptySeries { len: usize },

    #[error("times and values differ in length ({times} vs {values})")]
    LengthMismatch { times: usize, values: usize },

    #[error("timestamps not strictly increasing at index {index}")]
    NonMonotoneTimes { index: usize },

    #[error("non-finite {field} at index {index}")]
    NonFinite { field: &'static str, index: usize },

    #[error("time {time} at index {index} outside horizon [0, {horizon}]")]
    OutsideHorizon { index: usize, time: f64, horizon: f64 },

    #[error("grid index j={j} out of range for lag {lag} (n_sync={n_sync})")]
    IndexOutOfRange { j: usize, lag: usize, n_sync: usize },

    #[error("grid does not match series lengths ({x_len}, {y_len})")]
    GridMismatch { x_len: usize, y_len: usize },

    #[error("{name}={value} outside [{min}, {max}]")]
    TuningOutOfRange { name: &'static str, value: usize, min: usize, max: usize },

    #[error("noise variance must be non-negative, got {0}")]
    NegativeVariance(f64),

    #[error("degenerate configuration: {0}")]
    DegenerateConfig(&'static str),

    #[error("noise levels differ (eta_x={eta_x}, eta_y={eta_y}); use the general spectrum")]
    UnequalNoise { eta_x: f64, eta_y: f64 },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(&'static str),
}

impl Error {
    /// Stable machine-readable code, used as the prefix of CLI error lines.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptySeries { .. } => "E_EMPTY_SERIES",
            Error::LengthMismatch { .. } => "E_LENGTH_MISMATCH",
            Error::NonMonotoneTimes { .. } => "E_NON_MONOTONE",
            Error::NonFinite { .. } => "E_NON_FINITE",
            Error::OutsideHorizon { .. } => "E_OUTSIDE_HORIZON",
            Error::IndexOutOfRange { .. } => "E_INDEX_RANGE",
            Error::GridMismatch { .. } => "E_GRID_MISMATCH",
            Error::TuningOutOfRange { .. } => "E_TUNING_RANGE",
            Error::NegativeVariance(_) => "E_NEGATIVE_VARIANCE",
            Error::DegenerateConfig(_) => "E_DEGENERATE_CONFIG",
            Error::UnequalNoise { .. } => "E_UNEQUAL_NOISE",
            Error::ParameterOutOfRange(_) => "E_PARAM_RANGE",
        }
    }
}
