//! Synthetic asynchronous noisy observations and seeded Monte Carlo runs.
//!
//! Observation times of each asset are the arrivals of an independent Poisson
//! process started with an observation at time 0. The efficient log-prices
//! are correlated Brownian motions without drift, simulated exactly on the
//! union of both time grids, and each observation carries i.i.d. Gaussian
//! noise.
//!
//! Replication `r` of an experiment draws from a ChaCha8 stream keyed by the
//! master seed with stream id `r`, so any subset of replications can be run
//! in any order (or in parallel) with identical results.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::estimators::{optimal_k, optimal_m, plugin_noise_variance, EstimateReport, EstimatorKind};
use crate::series::TickSeries;
use crate::sum::NeumaierSum;
use crate::sync::synchronize;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimConfig {
    pub horizon: f64,
    /// Mean inter-arrival time of the first asset.
    pub theta_x: f64,
    /// Mean inter-arrival time of the second asset.
    pub theta_y: f64,
    pub rho: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
    /// Noise variance of the first asset.
    pub eta_x2: f64,
    /// Noise variance of the second asset.
    pub eta_y2: f64,
    pub seed: u64,
    pub replications: usize,
}

impl SimConfig {
    /// Laptop-sized setup: about 3000 ticks per asset, roughly 2000
    /// synchronized pairs, 200 replications, large noise.
    pub fn desk_scale() -> Self {
        Self {
            horizon: 1.0,
            theta_x: 1.0 / 3000.0,
            theta_y: 1.0 / 3000.0,
            rho: 0.5,
            sigma_x: 1.0,
            sigma_y: 1.0,
            eta_x2: libm::sqrt(0.1),
            eta_y2: libm::sqrt(0.1),
            seed: 0,
            replications: 200,
        }
    }

    /// Full-size setup: 30000 expected ticks per asset and 1000 replications.
    pub fn paper_scale() -> Self {
        Self {
            theta_x: 1.0 / 30000.0,
            theta_y: 1.0 / 30000.0,
            replications: 1000,
            ..Self::desk_scale()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::DegenerateConfig("horizon must be positive"));
        }
        if !(self.theta_x > 0.0 && self.theta_y > 0.0) {
            return Err(Error::DegenerateConfig("mean inter-arrival times must be positive"));
        }
        if !(self.rho.abs() <= 1.0) {
            return Err(Error::DegenerateConfig("correlation must lie in [-1, 1]"));
        }
        if !(self.sigma_x >= 0.0 && self.sigma_y >= 0.0) {
            return Err(Error::DegenerateConfig("volatilities must be non-negative"));
        }
        if !(self.eta_x2 >= 0.0) {
            return Err(Error::NegativeVariance(self.eta_x2));
        }
        if !(self.eta_y2 >= 0.0) {
            return Err(Error::NegativeVariance(self.eta_y2));
        }
        if self.replications < 1 {
            return Err(Error::DegenerateConfig("need at least one replication"));
        }
        Ok(())
    }

    /// Integrated covariance of the constant-parameter model.
    pub fn true_covariance(&self) -> f64 {
        self.rho * self.sigma_x * self.sigma_y * self.horizon
    }
}

/// Observation times `0, E_1, E_1 + E_2, ...` up to `horizon`, with
/// `E_k ~ Exp(mean theta)`.
pub fn poisson_times<R: RngCore + ?Sized>(theta: f64, horizon: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::DegenerateConfig("horizon must be positive"));
    }
    if !(theta > 0.0) {
        return Err(Error::DegenerateConfig("mean inter-arrival time must be positive"));
    }
    if theta >= 10.0 * horizon {
        return Err(Error::DegenerateConfig("mean inter-arrival time exceeds ten horizons"));
    }
    let mut times = Vec::with_capacity((horizon / theta * 1.1) as usize + 8);
    times.push(0.0);
    let mut t = 0.0;
    loop {
        let e: f64 = Exp1.sample(rng);
        t += theta * e;
        if t > horizon {
            break;
        }
        times.push(t);
    }
    Ok(times)
}

/// Expected number of synchronized pairs `N` for Poisson sampling,
/// `horizon / (theta_x + theta_y - theta_x theta_y / (theta_x + theta_y))`.
pub fn expected_sync_count(theta_x: f64, theta_y: f64, horizon: f64) -> Result<f64> {
    if !(theta_x > 0.0 && theta_y > 0.0 && horizon > 0.0) {
        return Err(Error::ParameterOutOfRange("inter-arrival means and horizon must be positive"));
    }
    Ok(horizon / (theta_x + theta_y - theta_x * theta_y / (theta_x + theta_y)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedPair {
    pub x: TickSeries,
    pub y: TickSeries,
    pub true_cov: f64,
}

#[inline]
fn normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Simulates observations on the given time grids.
///
/// Both efficient paths start at 0 and are evaluated on the merged grid of
/// `x_times` and `y_times`; for every merged interval one increment of the
/// driving Brownian motion of `x` and one of an independent motion are drawn.
/// Noise is added afterwards, first for all `x` observations, then for `y`.
pub fn simulate_on_times<R: RngCore + ?Sized>(
    cfg: &SimConfig,
    x_times: Vec<f64>,
    y_times: Vec<f64>,
    rng: &mut R,
) -> Result<SimulatedPair> {
    let x_sigma_path = cfg.sigma_x;
    let rho_c = libm::sqrt((1.0 - cfg.rho * cfg.rho).max(0.0));
    let mut x_eff = Vec::with_capacity(x_times.len());
    let mut y_eff = Vec::with_capacity(y_times.len());

    let (mut i, mut j) = (0usize, 0usize);
    let (mut b_x, mut b_indep) = (0.0f64, 0.0f64);
    let mut last = 0.0f64;
    while i < x_times.len() || j < y_times.len() {
        let next = match (x_times.get(i), y_times.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        let dt = next - last;
        if dt > 0.0 {
            let sd = libm::sqrt(dt);
            b_x += sd * normal(rng);
            b_indep += sd * normal(rng);
        }
        last = next;
        if x_times.get(i) == Some(&next) {
            x_eff.push(x_sigma_path * b_x);
            i += 1;
        }
        if y_times.get(j) == Some(&next) {
            y_eff.push(cfg.sigma_y * (cfg.rho * b_x + rho_c * b_indep));
            j += 1;
        }
    }

    let sd_x = libm::sqrt(cfg.eta_x2);
    let sd_y = libm::sqrt(cfg.eta_y2);
    for v in &mut x_eff {
        *v += sd_x * normal(rng);
    }
    for v in &mut y_eff {
        *v += sd_y * normal(rng);
    }

    Ok(SimulatedPair {
        x: TickSeries::new(x_times, x_eff)?,
        y: TickSeries::new(y_times, y_eff)?,
        true_cov: cfg.true_covariance(),
    })
}

/// Draws both Poisson grids (first `x`, then `y`) and simulates a pair on them.
pub fn simulate_pair<R: RngCore + ?Sized>(cfg: &SimConfig, rng: &mut R) -> Result<SimulatedPair> {
    cfg.validate()?;
    let x_times = poisson_times(cfg.theta_x, cfg.horizon, rng)?;
    let y_times = poisson_times(cfg.theta_y, cfg.horizon, rng)?;
    simulate_on_times(cfg, x_times, y_times, rng)
}

/// `(eta_x^2, eta_y^2)`.
pub type NoiseVariances = (f64, f64);

/// How `K` and `M` are chosen in each replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TuningPolicy {
    /// Optimal rules evaluated with the true noise variances.
    #[default]
    Oracle,
    /// Optimal rules evaluated with plug-in noise variances of each series.
    Plugin,
    /// Fixed values.
    Manual { k: Option<usize>, m: Option<usize> },
}

impl TuningPolicy {
    /// `(tuning, noise variances used)` for `kind` on a grid with `n_sync` pairs.
    pub fn resolve(
        &self,
        kind: EstimatorKind,
        n_sync: usize,
        x: &TickSeries,
        y: &TickSeries,
        true_noise: Option<(f64, f64)>,
    ) -> Result<(Option<usize>, Option<NoiseVariances>)> {
        if kind == EstimatorKind::Hy {
            return Ok((None, None));
        }
        let noise = match self {
            TuningPolicy::Oracle => Some(
                true_noise.ok_or(Error::ParameterOutOfRange("oracle tuning needs noise variances"))?,
            ),
            TuningPolicy::Plugin => Some((plugin_noise_variance(x), plugin_noise_variance(y))),
            TuningPolicy::Manual { .. } => None,
        };
        let tuning = match (self, kind, noise) {
            (TuningPolicy::Manual { k, .. }, EstimatorKind::Subsample, _) => {
                k.ok_or(Error::ParameterOutOfRange("manual tuning for sub needs K"))?
            }
            (TuningPolicy::Manual { m, .. }, EstimatorKind::MultiScale, _) => {
                m.ok_or(Error::ParameterOutOfRange("manual tuning for multi needs M"))?
            }
            (_, EstimatorKind::Subsample, Some((ex, ey))) => optimal_k(n_sync, ex, ey)?,
            (_, EstimatorKind::MultiScale, Some((ex, ey))) => optimal_m(n_sync, ex, ey)?,
            _ => unreachable!("hy handled above"),
        };
        Ok((Some(tuning), noise))
    }
}

/// Evaluates the selected estimators on a pair of series.
pub fn estimate_all(
    x: &TickSeries,
    y: &TickSeries,
    estimators: &[EstimatorKind],
    policy: TuningPolicy,
    true_noise: Option<(f64, f64)>,
) -> Result<Vec<EstimateReport>> {
    let grid = synchronize(x, y);
    estimators
        .iter()
        .map(|&kind| {
            let (tuning, noise) = policy.resolve(kind, grid.n_sync(), x, y, true_noise)?;
            let report = EstimateReport::compute(kind, &grid, x, y, tuning)?;
            Ok(match noise {
                Some((ex, ey)) => report.with_noise_variances(ex, ey),
                None => report,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ReplicationRecord {
    pub replication: usize,
    pub estimator: EstimatorKind,
    pub estimate: f64,
    pub n_sync: usize,
    pub tuning: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EstimatorSummary {
    pub estimator: EstimatorKind,
    pub mean: f64,
    pub bias: f64,
    /// Population variance over replications (divisor `R`).
    pub variance: f64,
    pub rmse: f64,
    pub mean_tuning: Option<f64>,
    pub mean_nsync: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct McResult {
    pub config: SimConfig,
    pub true_cov: f64,
    pub summaries: Vec<EstimatorSummary>,
    /// Ordered by replication, then by estimator selection order.
    pub records: Vec<ReplicationRecord>,
}

impl McResult {
    /// Aggregates per-replication records. Records must be ordered by
    /// replication; the summary order follows `estimators`.
    pub fn aggregate(config: SimConfig, estimators: &[EstimatorKind], records: Vec<ReplicationRecord>) -> Self {
        let true_cov = config.true_covariance();
        let summaries = estimators
            .iter()
            .map(|&kind| summarize(kind, true_cov, records.iter().filter(|r| r.estimator == kind)))
            .collect();
        Self { config, true_cov, summaries, records }
    }

    pub fn summary(&self, kind: EstimatorKind) -> Option<&EstimatorSummary> {
        self.summaries.iter().find(|s| s.estimator == kind)
    }

    /// Estimates of one estimator in replication order.
    pub fn estimates(&self, kind: EstimatorKind) -> Vec<f64> {
        self.records.iter().filter(|r| r.estimator == kind).map(|r| r.estimate).collect()
    }
}

fn summarize<'a>(
    kind: EstimatorKind,
    true_cov: f64,
    records: impl Iterator<Item = &'a ReplicationRecord> + Clone,
) -> EstimatorSummary {
    let count = records.clone().count();
    let r = count.max(1) as f64;
    let mean = records.clone().map(|x| x.estimate).collect::<NeumaierSum>().total() / r;
    let variance = records
        .clone()
        .map(|x| (x.estimate - mean) * (x.estimate - mean))
        .collect::<NeumaierSum>()
        .total()
        / r;
    let mse = records
        .clone()
        .map(|x| (x.estimate - true_cov) * (x.estimate - true_cov))
        .collect::<NeumaierSum>()
        .total()
        / r;
    let mean_nsync = records.clone().map(|x| x.n_sync as f64).collect::<NeumaierSum>().total() / r;
    let mean_tuning = if kind == EstimatorKind::Hy {
        None
    } else {
        Some(
            records
                .map(|x| x.tuning.unwrap_or(0) as f64)
                .collect::<NeumaierSum>()
                .total()
                / r,
        )
    };
    EstimatorSummary {
        estimator: kind,
        mean,
        bias: mean - true_cov,
        variance,
        rmse: libm::sqrt(mse),
        mean_tuning,
        mean_nsync,
    }
}

/// RNG for replication `replication` of an experiment seeded with `seed`.
pub fn replication_rng(seed: u64, replication: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication as u64);
    rng
}

/// One replication: simulate, synchronize, estimate.
pub fn run_replication(
    cfg: &SimConfig,
    estimators: &[EstimatorKind],
    policy: TuningPolicy,
    replication: usize,
) -> Result<Vec<ReplicationRecord>> {
    let mut rng = replication_rng(cfg.seed, replication);
    let pair = simulate_pair(cfg, &mut rng)?;
    let reports = estimate_all(&pair.x, &pair.y, estimators, policy, Some((cfg.eta_x2, cfg.eta_y2)))?;
    Ok(reports
        .into_iter()
        .map(|r| ReplicationRecord {
            replication,
            estimator: r.estimator,
            estimate: r.estimate,
            n_sync: r.n_sync,
            tuning: r.tuning,
        })
        .collect())
}

/// Runs all replications serially and aggregates them.
pub fn run_experiment(cfg: &SimConfig, estimators: &[EstimatorKind], policy: TuningPolicy) -> Result<McResult> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.replications * estimators.len());
    for rep in 0..cfg.replications {
        records.extend(run_replication(cfg, estimators, policy, rep)?);
    }
    Ok(McResult::aggregate(*cfg, estimators, records))
}
