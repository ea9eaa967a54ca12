//! Covariance estimators evaluated on a [`SyncGrid`].
//!
//! All three estimators are sums of products of lagged increment pairs
//! `(x[g[j]] - x[l[j-lag]]) * (y[gamma[j]] - y[lambda[j-lag]])`:
//!
//! * Hayashi-Yoshida: lag 0 over `j = 0..=N`;
//! * subsample: lag `K` over `j = K..=N`, divided by `K`;
//! * multi-scale: `sum_i alpha_i * subsample(i)` for `i = 1..=M`.
//!
//! Sums are accumulated in index order with compensated summation.

mod multiscale;
mod tuning;

use core::fmt;
use core::str::FromStr;

pub use multiscale::{multiscale_estimate, multiscale_weights, WeightVector};
pub use tuning::{optimal_k, optimal_m, plugin_noise_variance};

use crate::error::{Error, Result};
use crate::series::TickSeries;
use crate::sum::compensated_sum;
use crate::sync::SyncGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum EstimatorKind {
    #[cfg_attr(feature = "serde", serde(rename = "hy"))]
    Hy,
    #[cfg_attr(feature = "serde", serde(rename = "sub"))]
    Subsample,
    #[cfg_attr(feature = "serde", serde(rename = "multi"))]
    MultiScale,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 3] =
        [EstimatorKind::Hy, EstimatorKind::Subsample, EstimatorKind::MultiScale];

    /// Short name used in reports and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Hy => "hy",
            EstimatorKind::Subsample => "sub",
            EstimatorKind::MultiScale => "multi",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "hy" | "HY" => Ok(EstimatorKind::Hy),
            "sub" | "subsample" => Ok(EstimatorKind::Subsample),
            "multi" | "multiscale" => Ok(EstimatorKind::MultiScale),
            _ => Err(Error::ParameterOutOfRange("unknown estimator (expected hy, sub or multi)")),
        }
    }
}

/// One point estimate with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EstimateReport {
    pub estimator: EstimatorKind,
    pub estimate: f64,
    pub n_sync: usize,
    /// `K` for the subsample estimator, `M` for the multi-scale estimator.
    pub tuning: Option<usize>,
    pub noise_variances_used: Option<(f64, f64)>,
}

impl EstimateReport {
    /// Evaluates `kind` on the grid. `tuning` is required for the subsample
    /// and multi-scale estimators and ignored for Hayashi-Yoshida.
    pub fn compute(
        kind: EstimatorKind,
        grid: &SyncGrid,
        x: &TickSeries,
        y: &TickSeries,
        tuning: Option<usize>,
    ) -> Result<Self> {
        let n_sync = grid.n_sync();
        let (estimate, tuning) = match kind {
            EstimatorKind::Hy => (hy_estimate(grid, x, y)?, None),
            EstimatorKind::Subsample => {
                let k = tuning.ok_or(Error::ParameterOutOfRange("subsample estimator needs K"))?;
                (subsample_estimate(grid, x, y, k)?, Some(k))
            }
            EstimatorKind::MultiScale => {
                let m = tuning.ok_or(Error::ParameterOutOfRange("multi-scale estimator needs M"))?;
                (multiscale_estimate(grid, x, y, m)?, Some(m))
            }
        };
        Ok(Self { estimator: kind, estimate, n_sync, tuning, noise_variances_used: None })
    }

    pub fn with_noise_variances(mut self, eta_x2: f64, eta_y2: f64) -> Self {
        self.noise_variances_used = Some((eta_x2, eta_y2));
        self
    }
}

/// Hayashi-Yoshida estimator in its synchronized form
/// `sum_{i=0}^{N} (x[g_i] - x[l_i]) (y[gamma_i] - y[lambda_i])`.
pub fn hy_estimate(grid: &SyncGrid, x: &TickSeries, y: &TickSeries) -> Result<f64> {
    grid.check_series(x, y)?;
    Ok(compensated_sum(grid.lagged_products(x.values(), y.values(), 0)))
}

/// Subsample estimator
/// `(1/K) sum_{i=K}^{N} (x[g_i] - x[l_{i-K}]) (y[gamma_i] - y[lambda_{i-K}])`,
/// without boundary weights.
pub fn subsample_estimate(grid: &SyncGrid, x: &TickSeries, y: &TickSeries, k: usize) -> Result<f64> {
    grid.check_series(x, y)?;
    let n_sync = grid.n_sync();
    if k < 1 || k > n_sync {
        return Err(Error::TuningOutOfRange { name: "K", value: k, min: 1, max: n_sync });
    }
    Ok(lag_sum(grid, x, y, k) / k as f64)
}

/// Unnormalized sum of lag-`lag` products.
pub(crate) fn lag_sum(grid: &SyncGrid, x: &TickSeries, y: &TickSeries, lag: usize) -> f64 {
    compensated_sum(grid.lagged_products(x.values(), y.values(), lag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sync::synchronize;
    use alloc::vec::Vec;

    fn sync_pair(xv: &[f64], yv: &[f64]) -> (TickSeries, TickSeries, SyncGrid) {
        let times: Vec<f64> = (0..xv.len()).map(|i| i as f64).collect();
        let x = TickSeries::new(times.clone(), xv.to_vec()).unwrap();
        let y = TickSeries::new(times, yv.to_vec()).unwrap();
        let grid = synchronize(&x, &y);
        (x, y, grid)
    }

    #[test]
    fn hy_on_synchronous_toy() {
        let (x, y, grid) = sync_pair(&[0.0, 1.0, 3.0], &[0.0, 2.0, 2.0]);
        assert_eq!(hy_estimate(&grid, &x, &y).unwrap(), 2.0);
    }

    #[test]
    fn hy_self_covariance_is_realized_variance() {
        let (x, y, grid) = sync_pair(&[0.0, 1.0, 3.0], &[0.0, 1.0, 3.0]);
        assert_eq!(hy_estimate(&grid, &x, &y).unwrap(), 5.0);
    }

    #[test]
    fn subsample_lag_one_spans_two_sets() {
        // l[i-1] precedes H^{i-1}, so each lag-1 term covers H^{i-1} and H^i:
        // (x1-x0)(y1-y0) + (x2-x0)(y2-y0) = 1*2 + 3*2
        let (x, y, grid) = sync_pair(&[0.0, 1.0, 3.0], &[0.0, 2.0, 2.0]);
        assert_eq!(subsample_estimate(&grid, &x, &y, 1).unwrap(), 8.0);
    }

    #[test]
    fn subsample_lag_two_on_four_points() {
        // (1/2)[(x2-x0)(y2-y0) + (x3-x0)(y3-y0)] with l = [0,0,1,2]
        let (x, y, grid) = sync_pair(&[0.0, 1.0, 3.0, 4.0], &[0.0, 2.0, 2.0, 5.0]);
        assert_eq!(subsample_estimate(&grid, &x, &y, 2).unwrap(), 13.0);
    }

    #[test]
    fn subsample_full_lag_is_single_term() {
        let (x, y, grid) = sync_pair(&[0.0, 1.0, 3.0, 4.0], &[0.0, 2.0, 2.0, 5.0]);
        assert_eq!(subsample_estimate(&grid, &x, &y, 3).unwrap(), 4.0 * 5.0 / 3.0);
    }

    #[test]
    fn subsample_tuning_range() {
        let (x, y, grid) = sync_pair(&[0.0, 1.0, 3.0], &[0.0, 2.0, 2.0]);
        assert_eq!(
            subsample_estimate(&grid, &x, &y, 0),
            Err(Error::TuningOutOfRange { name: "K", value: 0, min: 1, max: 2 })
        );
        assert_eq!(
            subsample_estimate(&grid, &x, &y, 3),
            Err(Error::TuningOutOfRange { name: "K", value: 3, min: 1, max: 2 })
        );
    }

    #[test]
    fn mismatched_grid_is_rejected() {
        let (x, y, grid) = sync_pair(&[0.0, 1.0, 3.0], &[0.0, 2.0, 2.0]);
        let (x4, _, _) = sync_pair(&[0.0, 1.0, 3.0, 4.0], &[0.0; 4]);
        assert!(matches!(hy_estimate(&grid, &x4, &y), Err(Error::GridMismatch { .. })));
        assert!(hy_estimate(&grid, &x, &y).is_ok());
    }

    #[test]
    fn report_carries_tuning() {
        let (x, y, grid) = sync_pair(&[0.0, 1.0, 3.0, 4.0], &[0.0, 2.0, 2.0, 5.0]);
        let hy = EstimateReport::compute(EstimatorKind::Hy, &grid, &x, &y, Some(7)).unwrap();
        assert_eq!(hy.tuning, None);
        let sub = EstimateReport::compute(EstimatorKind::Subsample, &grid, &x, &y, Some(2)).unwrap();
        assert_eq!((sub.estimate, sub.tuning, sub.n_sync), (13.0, Some(2), 3));
        assert!(EstimateReport::compute(EstimatorKind::MultiScale, &grid, &x, &y, None).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in EstimatorKind::ALL {
            assert_eq!(kind.name().parse::<EstimatorKind>().unwrap(), kind);
        }
        assert!("kernel".parse::<EstimatorKind>().is_err());
    }
}
