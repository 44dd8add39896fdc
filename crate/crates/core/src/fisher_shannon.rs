//! Differential entropy, Shannon entropy power, Fisher information and
//! Fisher-Shannon complexity of a fitted density.
//!
//! Both integrals use the trapezoidal rule on the KDE grid. Nodes where the
//! density falls below [`DENSITY_FLOOR`] times its maximum contribute zero:
//! in the far tails `f'^2 / f` is a ratio of underflowing quantities.
//! Logarithms are natural, so entropies are in nats, `N` carries squared
//! data units, `I` inverse squared data units, and `C = N * I` is
//! dimensionless.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::ingest::DEFAULT_MIN_WINDOW_SAMPLES;
use crate::kde::DEFAULT_GRID_SIZE;
use crate::kde::{
    fit_with, select_bandwidth, Bandwidth, BandwidthMethod, DensityEstimate, EvalPath, FitOptions,
};
use crate::quadrature::trapezoid;

/// Relative density floor below which integrands are set to zero.
pub const DENSITY_FLOOR: f64 = 1e-12;

/// `-∫ f ln f dx`, with `0 ln 0 = 0`.
pub fn differential_entropy(estimate: &DensityEstimate<'_>) -> f64 {
    let floor = DENSITY_FLOOR * estimate.max_density();
    let integrand: Vec<f64> = estimate
        .density()
        .iter()
        .map(|&f| if f > floor && f > 0.0 { -f * f.ln() } else { 0.0 })
        .collect();
    trapezoid(&integrand, estimate.spacing())
}

/// `N = exp(2H) / (2 pi e)`.
pub fn entropy_power(entropy: f64) -> Result<f64> {
    // exp(2H - ln(2 pi e)) avoids overflowing the numerator alone.
    let n = (2.0 * entropy - 1.0 - (2.0 * PI).ln()).exp();
    if n.is_finite() && n > 0.0 {
        Ok(n)
    } else {
        Err(Error::EntropyPowerOverflow(entropy))
    }
}

/// `∫ f'^2 / f dx` using the analytic kernel derivative.
pub fn fisher_information(estimate: &DensityEstimate<'_>) -> f64 {
    let floor = DENSITY_FLOOR * estimate.max_density();
    let integrand: Vec<f64> = estimate
        .density()
        .iter()
        .zip(estimate.derivative())
        .map(|(&f, &d)| if f > floor && f > 0.0 { d * d / f } else { 0.0 })
        .collect();
    trapezoid(&integrand, estimate.spacing())
}

pub fn fs_complexity(entropy_power: f64, fisher_information: f64) -> f64 {
    entropy_power * fisher_information
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsConfig {
    pub bandwidth: BandwidthMethod,
    pub grid_size: usize,
    pub min_samples: usize,
    pub path: EvalPath,
}

impl Default for FsConfig {
    fn default() -> Self {
        Self {
            bandwidth: BandwidthMethod::Silverman,
            grid_size: DEFAULT_GRID_SIZE,
            min_samples: DEFAULT_MIN_WINDOW_SAMPLES,
            path: EvalPath::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsMetrics {
    /// Differential entropy H, nats.
    pub entropy: f64,
    /// Shannon entropy power N.
    pub entropy_power: f64,
    /// Fisher information measure I.
    pub fisher_information: f64,
    /// Fisher-Shannon complexity C = N * I.
    pub complexity: f64,
    pub bandwidth: Bandwidth,
    pub sample_count: usize,
}

/// Metrics of an already fitted density.
pub fn metrics_of(estimate: &DensityEstimate<'_>) -> Result<FsMetrics> {
    let entropy = differential_entropy(estimate);
    let entropy_power = entropy_power(entropy)?;
    let fisher_information = fisher_information(estimate);
    if fisher_information <= 0.0 || !fisher_information.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "degenerate Fisher information {fisher_information}"
        )));
    }
    Ok(FsMetrics {
        entropy,
        entropy_power,
        fisher_information,
        complexity: fs_complexity(entropy_power, fisher_information),
        bandwidth: estimate.bandwidth(),
        sample_count: estimate.samples().len(),
    })
}

/// Bandwidth selection, KDE fit, and all four measures for one window.
pub fn analyze_window(samples: &[f64], config: &FsConfig) -> Result<FsMetrics> {
    if samples.len() < config.min_samples {
        return Err(Error::TooFewSamples {
            required: config.min_samples,
            got: samples.len(),
        });
    }
    let bandwidth = select_bandwidth(samples, config.bandwidth)?;
    let estimate = fit_with(
        samples,
        bandwidth,
        &FitOptions {
            grid_size: config.grid_size,
            path: config.path,
        },
    )?;
    metrics_of(&estimate)
}
