//! Summary statistics, per-window moments, Pearson correlation and its
//! permutation test, and histogram/KDE export.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ingest::{TimeSeries, Window};
use crate::kde::DensityEstimate;

/// Default number of permutation replicates.
pub const DEFAULT_PERMUTATIONS: usize = 999;

/// Slack when comparing `|r_perm| >= |r_obs|`, so that permutations giving
/// the observed coefficient up to rounding are counted.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Largest sample size accepted by exhaustive enumeration (10! orderings).
pub const MAX_EXHAUSTIVE: usize = 10;

/// Quantile of sorted data by linear interpolation between order
/// statistics, at position `(n - 1) * q` (the "type 7" convention).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let pos = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let t = pos - lo as f64;
    if t == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + t * (sorted[hi] - sorted[lo])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub mean: f64,
    pub q3: f64,
    pub max: f64,
    pub count: usize,
}

pub fn summarize(values: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
    let (min, max) = (sorted[0], sorted[sorted.len() - 1]);
    Ok(SummaryStats {
        min,
        q1: quantile_sorted(&sorted, 0.25),
        median: quantile_sorted(&sorted, 0.5),
        // Summation rounding can push the mean of near-constant data past an end.
        mean: mean.clamp(min, max),
        q3: quantile_sorted(&sorted, 0.75),
        max,
        count: sorted.len(),
    })
}

/// Mean and unbiased variance of the samples in one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowMoments {
    pub start: i64,
    pub end: i64,
    pub count: usize,
    pub mean: f64,
    /// `None` with fewer than two samples.
    pub variance: Option<f64>,
}

pub fn daily_moments(series: &TimeSeries, windows: &[Window]) -> Vec<WindowMoments> {
    windows
        .iter()
        .map(|w| {
            let xs = series.window_values(w);
            let n = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / n;
            let variance =
                (xs.len() >= 2).then(|| xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0));
            WindowMoments {
                start: w.start,
                end: w.end,
                count: xs.len(),
                mean,
                variance,
            }
        })
        .collect()
}

/// Pairs where both members are present. NaN marks a missing value.
pub fn complete_pairs(x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    Ok(x.iter()
        .zip(y)
        .filter(|(a, b)| !a.is_nan() && !b.is_nan())
        .map(|(a, b)| (*a, *b))
        .unzip())
}

/// Centered copies and their norms; the permutation test reuses these.
struct Centered {
    x: Vec<f64>,
    y: Vec<f64>,
    norm: f64,
}

impl Centered {
    fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        let (x, y) = complete_pairs(x, y)?;
        if x.len() < 3 {
            return Err(Error::TooFewSamples {
                required: 3,
                got: x.len(),
            });
        }
        let center = |v: Vec<f64>| {
            let m = v.iter().sum::<f64>() / v.len() as f64;
            let c: Vec<f64> = v.iter().map(|a| a - m).collect();
            let ss = c.iter().map(|a| a * a).sum::<f64>();
            (c, ss)
        };
        let (x, sxx) = center(x);
        let (y, syy) = center(y);
        if sxx == 0.0 || syy == 0.0 {
            return Err(Error::ZeroVariance);
        }
        Ok(Self {
            x,
            y,
            norm: (sxx * syy).sqrt(),
        })
    }

    fn r(&self) -> f64 {
        self.r_with(|i| self.y[i])
    }

    fn r_with(&self, y: impl Fn(usize) -> f64) -> f64 {
        let dot: f64 = self.x.iter().enumerate().map(|(i, a)| a * y(i)).sum();
        (dot / self.norm).clamp(-1.0, 1.0)
    }

    fn len(&self) -> usize {
        self.x.len()
    }
}

/// Sample Pearson correlation over complete pairs (NaN = missing).
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(Centered::new(x, y)?.r())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermutationMode {
    /// `replicates` seeded random permutations, add-one p-value.
    MonteCarlo { replicates: usize },
    /// Every ordering of the sample; exact p-value.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub channel_id: String,
    pub r: f64,
    pub p_value: f64,
    /// Random replicates R, or n! in exhaustive mode.
    pub permutations: usize,
    pub seed: u64,
    pub n_pairs: usize,
    pub mode: PermutationMode,
}

/// Two-sided permutation test of the Pearson correlation with `replicates`
/// seeded permutations of `y`:
/// `p = (1 + #{k : |r_k| >= |r_obs|}) / (R + 1)`.
pub fn permutation_test(x: &[f64], y: &[f64], replicates: usize, seed: u64) -> Result<CorrelationReport> {
    permutation_test_with(x, y, PermutationMode::MonteCarlo { replicates }, seed, true)
}

/// Replicate `k` draws its permutation from ChaCha8 seeded with `seed` on
/// stream `k`, so serial and parallel runs count exactly the same set.
pub fn permutation_test_with(
    x: &[f64],
    y: &[f64],
    mode: PermutationMode,
    seed: u64,
    parallel: bool,
) -> Result<CorrelationReport> {
    let data = Centered::new(x, y)?;
    let r_obs = data.r();
    let threshold = r_obs.abs() - TIE_TOLERANCE;
    let n = data.len();

    let (p_value, permutations) = match mode {
        PermutationMode::MonteCarlo { replicates } => {
            if replicates == 0 {
                return Err(Error::InvalidArgument(
                    "permutation count must be at least 1".into(),
                ));
            }
            let exceeds = |k: usize| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(k as u64);
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut rng);
                data.r_with(|i| data.y[order[i]]).abs() >= threshold
            };
            let hits = if parallel {
                (0..replicates).into_par_iter().filter(|&k| exceeds(k)).count()
            } else {
                (0..replicates).filter(|&k| exceeds(k)).count()
            };
            ((1 + hits) as f64 / (replicates + 1) as f64, replicates)
        }
        PermutationMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE {
                return Err(Error::InvalidArgument(format!(
                    "exhaustive permutation limited to n <= {MAX_EXHAUSTIVE}, got {n}"
                )));
            }
            let mut hits = 0usize;
            let mut total = 0usize;
            for_each_permutation(n, |order| {
                total += 1;
                if data.r_with(|i| data.y[order[i]]).abs() >= threshold {
                    hits += 1;
                }
            });
            (hits as f64 / total as f64, total)
        }
    };

    Ok(CorrelationReport {
        channel_id: String::new(),
        r: r_obs,
        p_value,
        permutations,
        seed,
        n_pairs: n,
        mode,
    })
}

/// Heap's algorithm over index orderings of `0..n`.
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut order: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    visit(&order);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(counters[i], i);
            }
            visit(&order);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityRow {
    pub bin_center: f64,
    pub hist_density: f64,
    pub kde_density: f64,
}

/// Density-normalised histogram of the fitted samples next to the KDE
/// interpolated at the bin centers.
///
/// Bins span the sample range; for constant data they span `x +- 3b`.
pub fn density_export(estimate: &DensityEstimate<'_>, bins: usize) -> Result<Vec<DensityRow>> {
    if bins < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 bins, got {bins}"
        )));
    }
    let samples = estimate.samples();
    let (mut lo, mut hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        });
    if hi <= lo {
        let b = estimate.bandwidth().value();
        lo -= 3.0 * b;
        hi += 3.0 * b;
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in samples {
        let k = (((x - lo) / width).floor().max(0.0) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let scale = 1.0 / (samples.len() as f64 * width);
    Ok(counts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let center = lo + (k as f64 + 0.5) * width;
            DensityRow {
                bin_center: center,
                hist_density: c as f64 * scale,
                kde_density: estimate.interpolate(center),
            }
        })
        .collect())
}
