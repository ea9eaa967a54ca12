//! Integrated covariance estimation from asynchronous, noise-contaminated
//! high-frequency observations of two log-price processes.
//!
//! The crate is `no_std` (with `alloc`) and contains the numerical core:
//!
//! * [`sync`] builds the joint grid pairing the two tick series into
//!   overlapping sets, stored as four index arrays.
//! * [`estimators`] evaluates the Hayashi-Yoshida, subsample and multi-scale
//!   estimators on that grid, together with the tuning rules for the number
//!   of subsamples `K` and scales `M`.
//! * [`simulation`] draws Poisson observation times, correlated Brownian
//!   efficient prices and i.i.d. Gaussian noise, and runs seeded Monte Carlo
//!   experiments.
//! * [`lan`] holds the closed-form spectrum of the increment covariance in
//!   the synchronous equidistant model and the Fisher information objects
//!   derived from it.
//!
//! File formats, the command line and the parallel experiment runner live in
//! the companion `asyncov` crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod estimators;
pub mod lan;
pub mod series;
pub mod simulation;
pub mod sum;
pub mod sync;

pub use error::{Error, Result};
pub use estimators::{
    hy_estimate, multiscale_estimate, multiscale_weights, optimal_k, optimal_m,
    plugin_noise_variance, subsample_estimate, EstimateReport, EstimatorKind, WeightVector,
};
pub use lan::{
    eigenvalues_equal_noise, eigenvalues_general, fisher_info_bounds, fisher_info_equal,
    gamma_sum, GammaSum, LanProfile,
};
pub use series::TickSeries;
pub use simulation::{
    expected_sync_count, poisson_times, run_experiment, simulate_pair, McResult, SimConfig,
    TuningPolicy,
};
pub use sync::{grid_increments, synchronize, SyncGrid};
