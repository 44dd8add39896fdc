//! Binned evaluation of the Gaussian KDE and its derivative on a uniform grid.
//!
//! Each sample is assigned to its nearest grid node `g_j` with offset
//! `s = (x - g_j) / b`, `|s| <= step / 2b`. For a node `g_k` at
//! `u = (g_k - g_j) / b` the kernel factorises as
//!
//! ```text
//! exp(-(u - s)^2 / 2) = exp(-u^2 / 2) * exp(-s^2 / 2) * sum_m (u s)^m / m!
//! ```
//!
//! so per-bin moments `M_m = sum_i s_i^m exp(-s_i^2/2)` reduce the fit to a
//! discrete convolution of a truncated Gaussian with polynomial weights. The
//! series order and the kernel half-width are chosen from the sample layout
//! so that every grid value matches direct summation to ~1e-10 relative.

use super::GAUSS_NORM;

/// Bound on the per-sample relative error of the truncated exponential series.
const SERIES_TOLERANCE: f64 = 1e-13;
/// Bound on the relative mass of samples dropped beyond the kernel cutoff.
const CUTOFF_TOLERANCE: f64 = 1e-12;
/// `exp(-u^2/2)` underflows to zero beyond this many bandwidths.
const MAX_CUTOFF: f64 = 40.0;
/// Beyond this product of cutoff and offset the series is no longer cheap.
const MAX_SERIES_ARGUMENT: f64 = 4.0;
const MAX_ORDER: usize = 48;

/// Returns `(f, f')` on the grid `lo + k*step`, or `None` when the grid is too
/// coarse relative to the bandwidth for the expansion to pay off.
pub(crate) fn evaluate_grid(
    samples: &[f64],
    bandwidth: f64,
    lo: f64,
    step: f64,
    len: usize,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = samples.len();
    if n == 0 || len < 2 {
        return None;
    }
    let b = bandwidth;

    let mut bin_of = Vec::with_capacity(n);
    let mut occupied = vec![false; len];
    for &x in samples {
        let j = (((x - lo) / step).round().max(0.0) as usize).min(len - 1);
        occupied[j] = true;
        bin_of.push(j);
    }

    // Farthest any grid node sits from its nearest sample, in bandwidths.
    let gap = farthest_gap(&occupied);
    let far = (gap as f64 + 0.5) * step / b;
    let cutoff = (far * far + 2.0 * (n as f64).ln() - 2.0 * CUTOFF_TOLERANCE.ln())
        .sqrt()
        .min(MAX_CUTOFF);
    let max_offset = 0.5 * step / b * (1.0 + 1e-9);
    let arg = (cutoff + max_offset) * max_offset;
    if arg > MAX_SERIES_ARGUMENT {
        return None;
    }
    let order = series_order(arg)?;
    let half = ((cutoff * b / step).ceil() as usize + 1).min(len - 1);

    // Moments laid out per bin: width = order + 2 (orders 0..=order+1).
    let width = order + 2;
    let mut moments = vec![0.0f64; len * width];
    for (&x, &j) in samples.iter().zip(&bin_of) {
        let s = (x - (lo + j as f64 * step)) / b;
        let mut term = (-0.5 * s * s).exp();
        let slot = &mut moments[j * width..(j + 1) * width];
        for m in slot.iter_mut() {
            *m += term;
            term *= s;
        }
    }

    // a_m = M_m / m!, c_m = M_{m+1} / m!
    let bins: Vec<usize> = (0..len).filter(|&j| occupied[j]).collect();
    let mut scaled_a = vec![0.0f64; bins.len() * (order + 1)];
    let mut scaled_c = vec![0.0f64; bins.len() * (order + 1)];
    for (slot, &j) in bins.iter().enumerate() {
        let src = &moments[j * width..(j + 1) * width];
        let mut factorial = 1.0;
        for m in 0..=order {
            if m > 0 {
                factorial *= m as f64;
            }
            scaled_a[slot * (order + 1) + m] = src[m] / factorial;
            scaled_c[slot * (order + 1) + m] = src[m + 1] / factorial;
        }
    }

    let ratio = step / b;
    let weights: Vec<f64> = (0..=half)
        .map(|d| {
            let u = d as f64 * ratio;
            (-0.5 * u * u).exp()
        })
        .collect();

    let norm = 1.0 / (b * n as f64 * GAUSS_NORM);
    let mut f = vec![0.0f64; len];
    let mut f_prime = vec![0.0f64; len];
    let mut first = 0usize;
    for k in 0..len {
        let lo_bin = k.saturating_sub(half);
        let hi_bin = (k + half).min(len - 1);
        while first < bins.len() && bins[first] < lo_bin {
            first += 1;
        }
        let mut sum = 0.0;
        let mut dsum = 0.0;
        for (slot, &j) in bins.iter().enumerate().skip(first) {
            if j > hi_bin {
                break;
            }
            let offset = k as isize - j as isize;
            let weight = weights[offset.unsigned_abs()];
            if weight == 0.0 {
                continue;
            }
            let u = offset as f64 * ratio;
            let a = &scaled_a[slot * (order + 1)..(slot + 1) * (order + 1)];
            let c = &scaled_c[slot * (order + 1)..(slot + 1) * (order + 1)];
            let pa = horner(a, u);
            let pc = horner(c, u);
            sum += weight * pa;
            dsum += weight * (u * pa - pc);
        }
        f[k] = sum * norm;
        f_prime[k] = -dsum * norm / b;
    }
    Some((f, f_prime))
}

fn horner(coefficients: &[f64], u: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

/// Smallest order p with `e^{2x} x^{p+1} / (p+1)! <= SERIES_TOLERANCE`.
fn series_order(x: f64) -> Option<usize> {
    let scale = (2.0 * x).exp();
    let mut term = x; // x^{p+1}/(p+1)! at p = 0
    for p in 0..=MAX_ORDER {
        if p >= 2 && scale * term <= SERIES_TOLERANCE {
            return Some(p);
        }
        term *= x / (p + 2) as f64;
    }
    None
}

/// Largest distance, in grid steps, from any node to the nearest occupied node.
fn farthest_gap(occupied: &[bool]) -> usize {
    let len = occupied.len();
    let mut left = vec![usize::MAX; len];
    let mut last = None;
    for k in 0..len {
        if occupied[k] {
            last = Some(k);
        }
        if let Some(j) = last {
            left[k] = k - j;
        }
    }
    let mut worst = 0;
    let mut next = None;
    for k in (0..len).rev() {
        if occupied[k] {
            next = Some(k);
        }
        let right = next.map_or(usize::MAX, |j| j - k);
        worst = worst.max(left[k].min(right));
    }
    worst
}
