use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Observation times and noisy log-prices of one asset.
///
/// Times are strictly increasing finite floats; there are at least two
/// observations. Observation indices run `0..=n` where `n = len() - 1`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TickSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TickSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::LengthMismatch { times: times.len(), values: values.len() });
        }
        if times.len() < 2 {
            return Err(Error::EmptySeries { len: times.len() });
        }
        if let Some(index) = times.iter().position(|t| !t.is_finite()) {
            return Err(Error::NonFinite { field: "time", index });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { field: "value", index });
        }
        if let Some(k) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NonMonotoneTimes { index: k + 1 });
        }
        Ok(Self { times, values })
    }

    /// Like [`TickSeries::new`], additionally requiring all times in `[0, horizon]`.
    pub fn with_horizon(times: Vec<f64>, values: Vec<f64>, horizon: f64) -> Result<Self> {
        let series = Self::new(times, values)?;
        let first = series.times[0];
        let last = series.times[series.times.len() - 1];
        if first < 0.0 {
            return Err(Error::OutsideHorizon { index: 0, time: first, horizon });
        }
        if last > horizon {
            let index = series.times.len() - 1;
            return Err(Error::OutsideHorizon { index, time: last, horizon });
        }
        Ok(series)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of observations.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    /// Always false; a valid series holds at least two observations.
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the last observation.
    pub fn last_index(&self) -> usize {
        self.times.len() - 1
    }

    /// First differences of the values.
    pub fn increments(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.windows(2).map(|w| w[1] - w[0])
    }

    /// Same observation times with every value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            times: self.times.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.times, self.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_short_series() {
        assert_eq!(TickSeries::new(vec![0.0], vec![1.0]), Err(Error::EmptySeries { len: 1 }));
        assert_eq!(TickSeries::new(vec![], vec![]), Err(Error::EmptySeries { len: 0 }));
    }

    #[test]
    fn rejects_duplicate_and_decreasing_times() {
        let err = TickSeries::new(vec![0.0, 1.0, 1.0], vec![0.0; 3]).unwrap_err();
        assert_eq!(err, Error::NonMonotoneTimes { index: 2 });
        let err = TickSeries::new(vec![0.0, 2.0, 1.0], vec![0.0; 3]).unwrap_err();
        assert_eq!(err, Error::NonMonotoneTimes { index: 2 });
    }

    #[test]
    fn rejects_length_mismatch_and_nan() {
        assert!(matches!(
            TickSeries::new(vec![0.0, 1.0], vec![0.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert_eq!(
            TickSeries::new(vec![0.0, f64::NAN], vec![0.0, 0.0]),
            Err(Error::NonFinite { field: "time", index: 1 })
        );
    }

    #[test]
    fn horizon_is_enforced() {
        assert!(TickSeries::with_horizon(vec![0.0, 1.0], vec![0.0, 0.0], 1.0).is_ok());
        assert!(matches!(
            TickSeries::with_horizon(vec![0.0, 1.5], vec![0.0, 0.0], 1.0),
            Err(Error::OutsideHorizon { index: 1, .. })
        ));
        assert!(matches!(
            TickSeries::with_horizon(vec![-0.5, 0.5], vec![0.0, 0.0], 1.0),
            Err(Error::OutsideHorizon { index: 0, .. })
        ));
    }

    #[test]
    fn increments_are_first_differences() {
        let s = TickSeries::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 3.0]).unwrap();
        assert_eq!(s.increments().collect::<Vec<_>>(), vec![1.0, 2.0]);
        assert_eq!(s.last_index(), 2);
    }
}
