//! Gaussian kernel density estimation.
//!
//! ```text
//! f(x) = 1 / (b L sqrt(2 pi)) * sum_i exp(-((x - x_i) / b)^2 / 2)
//! ```
//!
//! A fit tabulates `f` and its analytic derivative on a uniform grid that
//! extends [`SUPPORT_EXTENSION`] bandwidths past the sample range. Large
//! sample sets go through a binned series expansion (see [`binned`]); small
//! ones are summed directly.

mod bandwidth;
mod binned;

pub use bandwidth::{select_bandwidth, Bandwidth, BandwidthMethod};

use crate::error::{Error, Result};
use crate::quadrature::trapezoid;

/// `sqrt(2 pi)`
pub(crate) const GAUSS_NORM: f64 = 2.506_628_274_631_000_7;

/// Grid half-margin beyond the sample range, in bandwidths.
pub const SUPPORT_EXTENSION: f64 = 6.0;
pub const DEFAULT_GRID_SIZE: usize = 4096;
pub const MIN_GRID_SIZE: usize = 16;
/// Sample count above which [`EvalPath::Auto`] switches to binned evaluation.
pub const BINNED_THRESHOLD: usize = 10_000;

// exp(-u^2/2) is exactly 0.0 in f64 once u^2 exceeds this.
const UNDERFLOW_U2: f64 = 1500.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalPath {
    #[default]
    Auto,
    Direct,
    Binned,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub grid_size: usize,
    pub path: EvalPath,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            grid_size: DEFAULT_GRID_SIZE,
            path: EvalPath::Auto,
        }
    }
}

/// A fitted density: the samples it was built from, its bandwidth, and the
/// tabulated density and derivative on a uniform grid.
#[derive(Debug, Clone)]
pub struct DensityEstimate<'a> {
    samples: &'a [f64],
    bandwidth: Bandwidth,
    start: f64,
    step: f64,
    grid: Vec<f64>,
    density: Vec<f64>,
    derivative: Vec<f64>,
    binned: bool,
}

pub fn fit(samples: &[f64], bandwidth: Bandwidth, grid_size: usize) -> Result<DensityEstimate<'_>> {
    fit_with(
        samples,
        bandwidth,
        &FitOptions {
            grid_size,
            ..FitOptions::default()
        },
    )
}

pub fn fit_with<'a>(
    samples: &'a [f64],
    bandwidth: Bandwidth,
    options: &FitOptions,
) -> Result<DensityEstimate<'a>> {
    if samples.is_empty() {
        return Err(Error::TooFewSamples { required: 1, got: 0 });
    }
    if options.grid_size < MIN_GRID_SIZE {
        return Err(Error::GridTooSmall(options.grid_size));
    }
    if let Some(bad) = samples.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite sample {bad}")));
    }
    let b = bandwidth.value();
    let (min, max) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let start = min - SUPPORT_EXTENSION * b;
    let end = max + SUPPORT_EXTENSION * b;
    let len = options.grid_size;
    let step = (end - start) / (len - 1) as f64;
    let grid: Vec<f64> = (0..len).map(|k| start + k as f64 * step).collect();

    let want_binned = match options.path {
        EvalPath::Auto => samples.len() > BINNED_THRESHOLD,
        EvalPath::Direct => false,
        EvalPath::Binned => true,
    };
    let binned = if want_binned {
        binned::evaluate_grid(samples, b, start, step, len)
    } else {
        None
    };
    let is_binned = binned.is_some();
    let (density, derivative) = match binned {
        Some(pair) => pair,
        None => grid.iter().map(|&x| direct(samples, b, x)).unzip(),
    };

    Ok(DensityEstimate {
        samples,
        bandwidth,
        start,
        step,
        grid,
        density,
        derivative,
        binned: is_binned,
    })
}

/// Exact `(f(x), f'(x))` by summation over all samples.
fn direct(samples: &[f64], b: f64, x: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut dsum = 0.0;
    for &xi in samples {
        let u = (x - xi) / b;
        let u2 = u * u;
        if u2 > UNDERFLOW_U2 {
            continue;
        }
        let k = (-0.5 * u2).exp();
        sum += k;
        dsum += u * k;
    }
    let norm = 1.0 / (b * samples.len() as f64 * GAUSS_NORM);
    (sum * norm, -dsum * norm / b)
}

impl<'a> DensityEstimate<'a> {
    pub fn samples(&self) -> &'a [f64] {
        self.samples
    }

    pub fn bandwidth(&self) -> Bandwidth {
        self.bandwidth
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Density values at the grid nodes.
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Analytic density derivative at the grid nodes.
    pub fn derivative(&self) -> &[f64] {
        &self.derivative
    }

    pub fn spacing(&self) -> f64 {
        self.step
    }

    pub fn support(&self) -> (f64, f64) {
        (self.start, self.grid[self.grid.len() - 1])
    }

    /// Whether the grid was filled by the binned expansion.
    pub fn is_binned(&self) -> bool {
        self.binned
    }

    /// Exact, non-interpolated `(f(x), f'(x))`.
    pub fn evaluate(&self, x: f64) -> (f64, f64) {
        direct(self.samples, self.bandwidth.value(), x)
    }

    /// Linear interpolation of the tabulated density; zero off the grid.
    pub fn interpolate(&self, x: f64) -> f64 {
        let pos = (x - self.start) / self.step;
        let last = (self.grid.len() - 1) as f64;
        if pos.is_nan() || pos < -1e-9 || pos > last + 1e-9 {
            return 0.0;
        }
        let pos = pos.clamp(0.0, last);
        let k = (pos.floor() as usize).min(self.grid.len() - 2);
        let t = pos - k as f64;
        self.density[k] * (1.0 - t) + self.density[k + 1] * t
    }

    /// Trapezoidal integral of the tabulated density.
    pub fn mass(&self) -> f64 {
        trapezoid(&self.density, self.step)
    }

    pub fn max_density(&self) -> f64 {
        self.density.iter().copied().fold(0.0, f64::max)
    }
}
