//! Choice of `K` and `M` from the noise variances.

use crate::error::{Error, Result};
use crate::series::TickSeries;

fn check_variance(v: f64) -> Result<()> {
    // also rejects NaN
    if !(v >= 0.0) {
        return Err(Error::NegativeVariance(v));
    }
    Ok(())
}

/// Number of subsamples `K = round(cbrt(3 eta_x^2 eta_y^2) * N^(2/3))`,
/// clamped to `[1, N]`.
///
/// Rounding is half away from zero.
pub fn optimal_k(n_sync: usize, eta_x2: f64, eta_y2: f64) -> Result<usize> {
    check_variance(eta_x2)?;
    check_variance(eta_y2)?;
    if n_sync < 1 {
        return Err(Error::ParameterOutOfRange("n_sync must be at least 1"));
    }
    let n = n_sync as f64;
    let k = libm::round(libm::cbrt(3.0 * eta_x2 * eta_y2 * n * n));
    Ok(clamp_count(k, 1, n_sync))
}

/// Number of scales `M = round((36*35/52 eta_x^2 eta_y^2)^(1/4) * sqrt(N))`,
/// clamped to `[2, N]`.
pub fn optimal_m(n_sync: usize, eta_x2: f64, eta_y2: f64) -> Result<usize> {
    check_variance(eta_x2)?;
    check_variance(eta_y2)?;
    if n_sync < 2 {
        return Err(Error::TuningOutOfRange { name: "M", value: 2, min: 2, max: n_sync });
    }
    let n = n_sync as f64;
    let m = libm::round(libm::sqrt(libm::sqrt(36.0 * 35.0 / 52.0 * eta_x2 * eta_y2 * n * n)));
    Ok(clamp_count(m, 2, n_sync))
}

fn clamp_count(v: f64, lo: usize, hi: usize) -> usize {
    if v <= lo as f64 {
        lo
    } else if v >= hi as f64 {
        hi
    } else {
        v as usize
    }
}

/// Plug-in noise variance `sum (dX)^2 / (2 n)` over the `n` increments of
/// the series. Appropriate when noise dominates the efficient-price
/// increments.
pub fn plugin_noise_variance(series: &TickSeries) -> f64 {
    let n = series.len() - 1;
    let ss = crate::sum::compensated_sum(series.increments().map(|d| d * d));
    ss / (2.0 * n as f64)
}
