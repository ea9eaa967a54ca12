//! Spectral objects of the synchronous, equidistant Gaussian model.
//!
//! Increments of two correlated standard Brownian motions observed at
//! `t_i = i/N` with i.i.d. Gaussian noise (standard deviations `eta_x`,
//! `eta_y`) have a `2N x 2N` covariance
//!
//! ```text
//! [ A  D ]    A, B: tridiagonal Toeplitz, diagonal dt + 2 eta^2, off-diagonal -eta^2
//! [ D  B ]    D = theta * dt * I
//! ```
//!
//! whose eigenvalues are available in closed form. The squared relative
//! eigenvalue perturbations under `rho -> rho + h N^{-1/4}` sum to
//! `2 h^2 I(rho)`, with `I` the Fisher information computed here.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sum::compensated_sum;

/// Model parameters for one spectral evaluation. `eta_x >= eta_y` after
/// construction (the two assets are swapped if needed).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LanProfile {
    rho: f64,
    eta_x: f64,
    eta_y: f64,
    n_obs: usize,
    h: f64,
}

impl LanProfile {
    pub fn new(rho: f64, eta_x: f64, eta_y: f64, n_obs: usize, h: f64) -> Result<Self> {
        if !(rho.abs() < 1.0) {
            return Err(Error::ParameterOutOfRange("correlation must lie in (-1, 1)"));
        }
        if !(eta_x > 0.0 && eta_y > 0.0) || !eta_x.is_finite() || !eta_y.is_finite() {
            return Err(Error::ParameterOutOfRange("noise standard deviations must be positive"));
        }
        if n_obs < 1 {
            return Err(Error::ParameterOutOfRange("need at least one observation"));
        }
        if !h.is_finite() {
            return Err(Error::ParameterOutOfRange("local parameter must be finite"));
        }
        let (eta_x, eta_y) = if eta_x >= eta_y { (eta_x, eta_y) } else { (eta_y, eta_x) };
        let profile = Self { rho, eta_x, eta_y, n_obs, h };
        if profile.perturbed_rho().abs() > 1.0 {
            return Err(Error::ParameterOutOfRange("perturbed correlation leaves [-1, 1]"));
        }
        Ok(profile)
    }

    /// Equal noise levels on both assets.
    pub fn equal_noise(rho: f64, eta: f64, n_obs: usize, h: f64) -> Result<Self> {
        Self::new(rho, eta, eta, n_obs, h)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn eta_x(&self) -> f64 {
        self.eta_x
    }

    pub fn eta_y(&self) -> f64 {
        self.eta_y
    }

    pub fn n_obs(&self) -> usize {
        self.n_obs
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.n_obs as f64
    }

    pub fn is_equal_noise(&self) -> bool {
        self.eta_x == self.eta_y
    }

    /// `h N^{-1/4}`.
    pub fn perturbation(&self) -> f64 {
        self.h * libm::pow(self.n_obs as f64, -0.25)
    }

    pub fn perturbed_rho(&self) -> f64 {
        self.rho + self.perturbation()
    }
}

/// Eigenvalue pairs, `plus[i - 1]` and `minus[i - 1]` for `i = 1..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
}

impl Spectrum {
    /// All `2N` eigenvalues, interleaved `plus_1, minus_1, plus_2, ...`.
    pub fn interleaved(&self) -> Vec<f64> {
        self.plus.iter().zip(&self.minus).flat_map(|(&p, &m)| [p, m]).collect()
    }
}

/// `2 eta^2 (1 - cos(i pi / (N + 1)))`, written as `4 eta^2 sin^2` to avoid
/// cancellation at small angles.
#[inline]
fn noise_mode(eta2: f64, i: usize, n: usize) -> f64 {
    let s = libm::sin(i as f64 * PI / (2.0 * (n as f64 + 1.0)));
    4.0 * eta2 * s * s
}

/// Eigenvalues `dt + 2 eta^2 (1 - cos(i pi / (N+1)))` of one noise block.
pub fn block_eigenvalues(eta: f64, n: usize) -> Vec<f64> {
    let dt = 1.0 / n as f64;
    let eta2 = eta * eta;
    (1..=n).map(|i| dt + noise_mode(eta2, i, n)).collect()
}

/// Equal-noise spectrum `dt (1 +- theta) + 2 eta^2 (1 - cos(i pi / (N+1)))`.
///
/// The `plus` list pairs with `1 + theta` regardless of the sign of `theta`.
pub fn eigenvalues_equal_noise(profile: &LanProfile, theta: f64) -> Result<Spectrum> {
    if !profile.is_equal_noise() {
        return Err(Error::UnequalNoise { eta_x: profile.eta_x, eta_y: profile.eta_y });
    }
    let n = profile.n_obs;
    let dt = profile.dt();
    let eta2 = profile.eta_x * profile.eta_x;
    let (plus, minus) = (1..=n)
        .map(|i| {
            let mode = noise_mode(eta2, i, n);
            (dt * (1.0 + theta) + mode, dt * (1.0 - theta) + mode)
        })
        .unzip();
    Ok(Spectrum { plus, minus })
}

/// General spectrum
/// `xi_+- = (lx + ly)/2 +- sqrt(((lx - ly)/2)^2 + theta^2 dt^2)`.
///
/// Even in `theta`; `plus >= minus` elementwise. For equal noise and
/// `theta < 0` this is the equal-noise spectrum with the labels swapped.
pub fn eigenvalues_general(profile: &LanProfile, theta: f64) -> Spectrum {
    let n = profile.n_obs;
    let dt = profile.dt();
    let ex2 = profile.eta_x * profile.eta_x;
    let ey2 = profile.eta_y * profile.eta_y;
    let c2 = theta * theta * dt * dt;
    let (plus, minus) = (1..=n)
        .map(|i| {
            let lx = dt + noise_mode(ex2, i, n);
            let ly = dt + noise_mode(ey2, i, n);
            let half_gap = 0.5 * (lx - ly);
            let plus = 0.5 * (lx + ly) + libm::sqrt(half_gap * half_gap + c2);
            // product of the pair is lx*ly - theta^2 dt^2; avoids cancellation
            (plus, (lx * ly - c2) / plus)
        })
        .unzip();
    Spectrum { plus, minus }
}

/// Relative eigenvalue perturbations `lambda_j(rho + h N^{-1/4}) / lambda_j(rho) - 1`,
/// `j = 1..=2N`, interleaved as in [`Spectrum::interleaved`].
pub fn gamma_coefficients(profile: &LanProfile) -> Vec<f64> {
    let rho = profile.rho;
    let shifted = profile.perturbed_rho();
    let (base, moved) = if profile.is_equal_noise() {
        (
            eigenvalues_equal_noise(profile, rho).expect("equal noise"),
            eigenvalues_equal_noise(profile, shifted).expect("equal noise"),
        )
    } else {
        (eigenvalues_general(profile, rho), eigenvalues_general(profile, shifted))
    };
    base.interleaved()
        .into_iter()
        .zip(moved.interleaved())
        .map(|(b, m)| (m - b) / b)
        .collect()
}

/// Squared-perturbation sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaSum {
    /// Equal noise: the exact sum, converging to `2 h^2 I(rho)`.
    Exact(f64),
    /// Unequal noise: bounds converging to `2 h^2` times the Fisher
    /// information bounds, plus the exact sum computed from the general
    /// spectrum.
    Bracket { lower: f64, upper: f64, exact: f64 },
}

/// Sum of squared perturbation coefficients for the profile.
pub fn gamma_sum(profile: &LanProfile) -> Result<GammaSum> {
    if profile.perturbed_rho().abs() > 1.0 {
        return Err(Error::ParameterOutOfRange("perturbed correlation leaves [-1, 1]"));
    }
    let exact = compensated_sum(gamma_coefficients(profile).into_iter().map(|g| g * g));
    if profile.is_equal_noise() {
        return Ok(GammaSum::Exact(exact));
    }

    let n = profile.n_obs;
    let dt = profile.dt();
    let shift = profile.perturbation() * dt;
    let shift2 = shift * shift;
    let rdt = profile.rho * dt;
    let ex2 = profile.eta_x * profile.eta_x;
    let ey2 = profile.eta_y * profile.eta_y;
    let pair = |a: f64| shift2 / ((a + rdt) * (a + rdt)) + shift2 / ((a - rdt) * (a - rdt));
    let upper = compensated_sum((1..=n).map(|i| {
        pair(dt + 0.5 * (noise_mode(ex2, i, n) + noise_mode(ey2, i, n)))
    }));
    let lower = compensated_sum((1..=n).map(|i| pair(dt + noise_mode(ex2, i, n))));
    Ok(GammaSum::Bracket { lower, upper, exact })
}

/// `(1 + rho)^{-3/2} + (1 - rho)^{-3/2}`.
fn correlation_factor(rho: f64) -> f64 {
    libm::pow(1.0 + rho, -1.5) + libm::pow(1.0 - rho, -1.5)
}

/// Asymptotic Fisher information for `rho` with equal noise standard
/// deviation `eta`: `(1 / (8 eta)) ((1 + rho)^{-3/2} + (1 - rho)^{-3/2})`.
pub fn fisher_info_equal(rho: f64, eta: f64) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return Err(Error::ParameterOutOfRange("correlation must lie in (-1, 1)"));
    }
    if !(eta > 0.0) {
        return Err(Error::ParameterOutOfRange("noise standard deviation must be positive"));
    }
    Ok(correlation_factor(rho) / (8.0 * eta))
}

/// Lower and upper bound on the Fisher information for unequal noise:
/// `S / (8 max(eta))` and `sqrt(2) S / (8 sqrt(eta_x^2 + eta_y^2))`.
pub fn fisher_info_bounds(rho: f64, eta_x: f64, eta_y: f64) -> Result<(f64, f64)> {
    if !(rho.abs() < 1.0) {
        return Err(Error::ParameterOutOfRange("correlation must lie in (-1, 1)"));
    }
    if !(eta_x > 0.0 && eta_y > 0.0) {
        return Err(Error::ParameterOutOfRange("noise standard deviations must be positive"));
    }
    let (hi, lo) = if eta_x >= eta_y { (eta_x, eta_y) } else { (eta_y, eta_x) };
    let s = correlation_factor(rho);
    let lower = s / (8.0 * hi);
    let upper = core::f64::consts::SQRT_2 / 8.0 * s / libm::sqrt(hi * hi + lo * lo);
    // equal noise: both are the same number up to rounding
    Ok((lower, upper.max(lower)))
}

/// Partial sum, its limit and the relative deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConvergencePoint {
    pub sum_gamma_sq: f64,
    pub target: f64,
    /// `|sum - target| / |target|`, or the absolute deviation when the target is 0.
    pub rel_error: f64,
}

impl ConvergencePoint {
    fn new(sum_gamma_sq: f64, target: f64) -> Self {
        let dev = (sum_gamma_sq - target).abs();
        let rel_error = if target == 0.0 { dev } else { dev / target.abs() };
        Self { sum_gamma_sq, target, rel_error }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum ConvergenceRow {
    Equal { n: usize, point: ConvergencePoint },
    Bracket { n: usize, lower: ConvergencePoint, upper: ConvergencePoint },
}

/// One row per `N`: the squared-perturbation sum against `2 h^2 I(rho)`, or
/// for unequal noise both bracket sums against `2 h^2` times the bounds.
pub fn convergence_table(
    rho: f64,
    eta_x: f64,
    eta_y: f64,
    h: f64,
    n_list: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    n_list
        .iter()
        .map(|&n| {
            let profile = LanProfile::new(rho, eta_x, eta_y, n, h)?;
            let scale = 2.0 * h * h;
            Ok(match gamma_sum(&profile)? {
                GammaSum::Exact(sum) => {
                    let target = scale * fisher_info_equal(rho, profile.eta_x)?;
                    ConvergenceRow::Equal { n, point: ConvergencePoint::new(sum, target) }
                }
                GammaSum::Bracket { lower, upper, .. } => {
                    let (i_lo, i_hi) = fisher_info_bounds(rho, eta_x, eta_y)?;
                    ConvergenceRow::Bracket {
                        n,
                        lower: ConvergencePoint::new(lower, scale * i_lo),
                        upper: ConvergencePoint::new(upper, scale * i_hi),
                    }
                }
            })
        })
        .collect()
}
