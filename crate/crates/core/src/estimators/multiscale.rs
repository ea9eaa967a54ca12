use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::series::TickSeries;
use crate::sum::NeumaierSum;
use crate::sync::SyncGrid;

use super::lag_sum;

/// Multi-scale weights `alpha_1..alpha_M`.
///
/// The weights sum to one (unbiasedness) and `sum alpha_i / i = 0`, which
/// cancels the lag-independent noise term shared by all subsample estimators.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WeightVector {
    alpha: Vec<f64>,
}

impl WeightVector {
    /// Number of scales `M`.
    pub fn m_scales(&self) -> usize {
        self.alpha.len()
    }

    /// `alpha[i - 1]` is the weight of lag `i`.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// Leading-order form `12 i^2 / M^3 - 6 i / M^2`, kept for comparison.
    pub fn asymptotic(m: usize) -> Vec<f64> {
        let mf = m as f64;
        (1..=m)
            .map(|i| {
                let i = i as f64;
                12.0 * i * i / (mf * mf * mf) - 6.0 * i / (mf * mf)
            })
            .collect()
    }
}

/// Exact noise-optimal weights `alpha_i = 12 i^2 / (M^3 - M) - 6 i / ((M - 1) M)`.
pub fn multiscale_weights(m: usize) -> Result<WeightVector> {
    if m < 2 {
        return Err(Error::TuningOutOfRange { name: "M", value: m, min: 2, max: usize::MAX });
    }
    // Same expression over the common denominator M^3 - M; the numerator is
    // an exact integer in f64 for any practical M.
    let mf = m as f64;
    let denom = (mf - 1.0) * mf * (mf + 1.0);
    let alpha = (1..=m)
        .map(|i| {
            let i = i as f64;
            6.0 * i * (2.0 * i - mf - 1.0) / denom
        })
        .collect();
    Ok(WeightVector { alpha })
}

/// Multi-scale estimator `sum_{i=1}^{M} alpha_i * subsample(i)`.
pub fn multiscale_estimate(grid: &SyncGrid, x: &TickSeries, y: &TickSeries, m: usize) -> Result<f64> {
    grid.check_series(x, y)?;
    let n_sync = grid.n_sync();
    if m < 2 || m > n_sync {
        return Err(Error::TuningOutOfRange { name: "M", value: m, min: 2, max: n_sync });
    }
    let weights = multiscale_weights(m)?;
    let mut total = NeumaierSum::new();
    for (i, alpha) in (1..=m).zip(weights.alpha()) {
        total.add(alpha * (lag_sum(grid, x, y, i) / i as f64));
    }
    Ok(total.total())
}
