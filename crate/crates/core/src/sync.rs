//! Joint grid for two asynchronous tick series.
//!
//! The grid pairs sets of consecutive observation times `H^i` (of `x`) and
//! `G^i` (of `y`), `i = 0..=N`, so that the increment of `x` over `H^i` and the
//! increment of `y` over `G^i` cover overlapping time spans. A set is stored
//! through two indices: the greatest observation it contains (`g`, `gamma`)
//! and the observation preceding its least element (`l`, `lambda`), with the
//! convention `l[0] = lambda[0] = 0`. The increment of `x` over `H^i` is then
//! the telescoped difference `x[g[i]] - x[l[i]]`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::series::TickSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SyncGrid {
    g: Vec<usize>,
    l: Vec<usize>,
    gamma: Vec<usize>,
    lambda: Vec<usize>,
    x_len: usize,
    y_len: usize,
}

impl SyncGrid {
    fn with_capacity(cap: usize, x_len: usize, y_len: usize) -> Self {
        Self {
            g: Vec::with_capacity(cap),
            l: Vec::with_capacity(cap),
            gamma: Vec::with_capacity(cap),
            lambda: Vec::with_capacity(cap),
            x_len,
            y_len,
        }
    }

    fn push(&mut self, h: RangeInclusive<usize>, g: RangeInclusive<usize>) {
        let first = self.g.is_empty();
        self.l.push(if first { 0 } else { h.start() - 1 });
        self.g.push(*h.end());
        self.lambda.push(if first { 0 } else { g.start() - 1 });
        self.gamma.push(*g.end());
    }

    /// Greatest `x` index in each `H^i`.
    pub fn g(&self) -> &[usize] {
        &self.g
    }

    /// `x` index preceding the least element of each `H^i` (`l[0] = 0`).
    pub fn l(&self) -> &[usize] {
        &self.l
    }

    /// Greatest `y` index in each `G^i`.
    pub fn gamma(&self) -> &[usize] {
        &self.gamma
    }

    /// `y` index preceding the least element of each `G^i` (`lambda[0] = 0`).
    pub fn lambda(&self) -> &[usize] {
        &self.lambda
    }

    /// `N`: the grid holds `N + 1` set pairs.
    pub fn n_sync(&self) -> usize {
        self.g.len() - 1
    }

    /// Observation indices of `x` making up `H^i`.
    pub fn h_set(&self, i: usize) -> RangeInclusive<usize> {
        if i == 0 {
            0..=self.g[0]
        } else {
            self.l[i] + 1..=self.g[i]
        }
    }

    /// Observation indices of `y` making up `G^i`.
    pub fn g_set(&self, i: usize) -> RangeInclusive<usize> {
        if i == 0 {
            0..=self.gamma[0]
        } else {
            self.lambda[i] + 1..=self.gamma[i]
        }
    }

    /// Fails with [`Error::GridMismatch`] unless the grid was built from
    /// series of these lengths.
    pub fn check_series(&self, x: &TickSeries, y: &TickSeries) -> Result<()> {
        if x.len() != self.x_len || y.len() != self.y_len {
            return Err(Error::GridMismatch { x_len: x.len(), y_len: y.len() });
        }
        Ok(())
    }

    /// Increment pair over the union of `lag + 1` consecutive set pairs ending
    /// at `j`, i.e. `(x[g[j]] - x[l[j-lag]], y[gamma[j]] - y[lambda[j-lag]])`.
    /// `lag = 0` gives the increments over `H^j` and `G^j` themselves.
    ///
    /// Callers guarantee `lag <= j <= n_sync` and matching series.
    #[inline]
    pub(crate) fn increment_pair(&self, x: &[f64], y: &[f64], lag: usize, j: usize) -> (f64, f64) {
        let k = j - lag;
        (x[self.g[j]] - x[self.l[k]], y[self.gamma[j]] - y[self.lambda[k]])
    }

    /// Products of lagged increment pairs for `j = lag..=n_sync`, in index order.
    pub(crate) fn lagged_products<'a>(
        &'a self,
        x: &'a [f64],
        y: &'a [f64],
        lag: usize,
    ) -> impl Iterator<Item = f64> + 'a {
        (lag..=self.n_sync()).map(move |j| {
            let (dx, dy) = self.increment_pair(x, y, lag, j);
            dx * dy
        })
    }
}

/// Builds the joint grid of `x` and `y`.
///
/// Each step starts from the next unused observations `t[q]` of `x` and
/// `tau[r]` of `y`. If they coincide both form singleton sets. Otherwise the
/// earlier series collects observations up to and including the first one at
/// or after the other's pending time, and the later series contributes a
/// singleton. The bracketing observation is reused by the next set unless it
/// coincides exactly with the other series' time.
///
/// When one series runs out of observations before the other, the remaining
/// observations are absorbed into the last set, so `g[N] = n` and
/// `gamma[N] = m` always hold.
pub fn synchronize(x: &TickSeries, y: &TickSeries) -> SyncGrid {
    let t = x.times();
    let tau = y.times();
    let n = t.len() - 1;
    let m = tau.len() - 1;
    let mut grid = SyncGrid::with_capacity(n.min(m) + 1, t.len(), tau.len());

    let (mut q, mut r) = (0usize, 0usize);
    while q <= n && r <= m {
        match t[q].partial_cmp(&tau[r]).expect("finite times") {
            Ordering::Equal => {
                grid.push(q..=q, r..=r);
                q += 1;
                r += 1;
            }
            Ordering::Less => {
                let target = tau[r];
                let w = q + 1 + t[q + 1..].partition_point(|&s| s < target);
                if w > n {
                    grid.push(q..=n, r..=r);
                    q = n + 1;
                } else {
                    grid.push(q..=w, r..=r);
                    q = if t[w] == target { w + 1 } else { w };
                }
                r += 1;
            }
            Ordering::Greater => {
                let target = t[q];
                let w = r + 1 + tau[r + 1..].partition_point(|&s| s < target);
                if w > m {
                    grid.push(q..=q, r..=m);
                    r = m + 1;
                } else {
                    grid.push(q..=q, r..=w);
                    r = if tau[w] == target { w + 1 } else { w };
                }
                q += 1;
            }
        }
    }

    let last = grid.g.len() - 1;
    if q <= n {
        grid.g[last] = n;
    }
    if r <= m {
        grid.gamma[last] = m;
    }
    grid
}

/// Lagged increment pair at grid position `j`:
/// `(x[g[j]] - x[l[j-lag]], y[gamma[j]] - y[lambda[j-lag]])`.
pub fn grid_increments(
    grid: &SyncGrid,
    x: &TickSeries,
    y: &TickSeries,
    lag: usize,
    j: usize,
) -> Result<(f64, f64)> {
    grid.check_series(x, y)?;
    let n_sync = grid.n_sync();
    if lag == 0 || j < lag || j > n_sync {
        return Err(Error::IndexOutOfRange { j, lag, n_sync });
    }
    Ok(grid.increment_pair(x.values(), y.values(), lag, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn series(times: &[f64]) -> TickSeries {
        TickSeries::new(times.to_vec(), times.to_vec()).unwrap()
    }

    fn sets(grid: &SyncGrid) -> Vec<(Vec<usize>, Vec<usize>)> {
        (0..=grid.n_sync())
            .map(|i| (grid.h_set(i).collect(), grid.g_set(i).collect()))
            .collect()
    }

    #[test]
    fn worked_example_grid() {
        let x = series(&[0.0, 1.0, 5.0, 7.0, 8.0, 10.0]);
        let y = series(&[0.0, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0]);
        let grid = synchronize(&x, &y);
        assert_eq!(grid.n_sync(), 5);
        assert_eq!(grid.g(), &[0, 2, 2, 3, 4, 5]);
        assert_eq!(grid.gamma(), &[0, 1, 4, 5, 5, 6]);
        assert_eq!(grid.l(), &[0, 0, 1, 2, 3, 4]);
        assert_eq!(grid.lambda(), &[0, 0, 1, 3, 4, 5]);
        assert_eq!(
            sets(&grid),
            vec![
                (vec![0], vec![0]),
                (vec![1, 2], vec![1]),
                (vec![2], vec![2, 3, 4]),
                (vec![3], vec![4, 5]),
                (vec![4], vec![5]),
                (vec![5], vec![6]),
            ]
        );
    }

    #[test]
    fn synchronous_series_pair_identically() {
        let x = series(&[0.0, 1.0, 2.0]);
        let grid = synchronize(&x, &x.clone());
        assert_eq!(grid.g(), &[0, 1, 2]);
        assert_eq!(grid.gamma(), &[0, 1, 2]);
        assert_eq!(grid.l(), &[0, 0, 1]);
        assert_eq!(grid.lambda(), &[0, 0, 1]);
        assert_eq!(grid.n_sync(), 2);
    }

    #[test]
    fn later_x_with_coinciding_boundary() {
        let x = series(&[0.0, 2.0]);
        let y = series(&[0.0, 1.0, 2.0]);
        let grid = synchronize(&x, &y);
        assert_eq!(grid.g(), &[0, 1]);
        assert_eq!(grid.gamma(), &[0, 2]);
        assert_eq!(grid.l(), &[0, 0]);
        assert_eq!(grid.lambda(), &[0, 0]);
        assert_eq!(grid.n_sync(), 1);
    }

    #[test]
    fn first_step_with_earlier_x_start() {
        // t0 < tau0: H^0 collects x up to the first time at or after tau0.
        let x = series(&[0.0, 0.5, 1.5, 3.0]);
        let y = series(&[1.0, 2.0, 3.0]);
        let grid = synchronize(&x, &y);
        assert_eq!(
            sets(&grid),
            vec![(vec![0, 1, 2], vec![0]), (vec![2, 3], vec![1]), (vec![3], vec![2])]
        );
    }

    #[test]
    fn trailing_observations_are_absorbed() {
        let x = series(&[0.0, 1.0, 2.0]);
        let y = series(&[0.0, 0.5, 1.5, 2.5, 3.0]);
        let grid = synchronize(&x, &y);
        assert_eq!(grid.g()[grid.n_sync()], 2);
        assert_eq!(grid.gamma()[grid.n_sync()], 4);
        assert_eq!(
            sets(&grid),
            vec![(vec![0], vec![0]), (vec![1], vec![1, 2]), (vec![2], vec![2, 3, 4])]
        );

        // x outlasts y
        let x = series(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let y = series(&[0.0, 1.5]);
        let grid = synchronize(&x, &y);
        assert_eq!(sets(&grid), vec![(vec![0], vec![0]), (vec![1, 2, 3, 4], vec![1])]);
    }

    #[test]
    fn grid_increments_contract() {
        let x = TickSeries::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 3.0]).unwrap();
        let y = TickSeries::new(vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 2.0]).unwrap();
        let grid = synchronize(&x, &y);
        assert_eq!(grid_increments(&grid, &x, &y, 1, 1).unwrap(), (1.0, 2.0));
        assert_eq!(grid_increments(&grid, &x, &y, 2, 2).unwrap(), (3.0, 2.0));
        assert_eq!(
            grid_increments(&grid, &x, &y, 2, 1),
            Err(Error::IndexOutOfRange { j: 1, lag: 2, n_sync: 2 })
        );
        assert!(matches!(
            grid_increments(&grid, &x, &y, 1, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(grid_increments(&grid, &x, &y, 0, 1).is_err());
    }

    #[test]
    fn grid_increments_on_worked_example() {
        let x = series(&[0.0, 1.0, 5.0, 7.0, 8.0, 10.0]);
        let y = series(&[0.0, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0]);
        let grid = synchronize(&x, &y);
        // identity paths: increments are time spans, t[g2] - t[l1] and tau[gamma2] - tau[lambda1]
        assert_eq!(grid_increments(&grid, &x, &y, 1, 2).unwrap(), (5.0, 6.0));
    }

    #[test]
    fn grid_rejects_foreign_series() {
        let x = series(&[0.0, 1.0, 2.0]);
        let grid = synchronize(&x, &x);
        let other = series(&[0.0, 1.0]);
        assert!(matches!(
            grid_increments(&grid, &other, &x, 1, 1),
            Err(Error::GridMismatch { .. })
        ));
    }
}
