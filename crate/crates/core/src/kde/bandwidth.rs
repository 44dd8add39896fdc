use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::stats::quantile_sorted;

/// How a bandwidth is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum BandwidthMethod {
    /// Normal-reference rule of thumb `1.06 * min(s, IQR/1.34) * L^(-1/5)`.
    #[default]
    Silverman,
    /// Sheather-Jones solve-the-equation plug-in.
    Plugin,
    /// User supplied value.
    Fixed(f64),
}

impl BandwidthMethod {
    pub fn name(&self) -> &'static str {
        match self {
            BandwidthMethod::Silverman => "silverman",
            BandwidthMethod::Plugin => "plugin",
            BandwidthMethod::Fixed(_) => "fixed",
        }
    }
}

impl fmt::Display for BandwidthMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandwidthMethod::Fixed(b) => write!(f, "fixed({b})"),
            other => f.write_str(other.name()),
        }
    }
}

impl std::str::FromStr for BandwidthMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "silverman" => Ok(BandwidthMethod::Silverman),
            "plugin" | "sj" => Ok(BandwidthMethod::Plugin),
            other => {
                let value = other
                    .strip_prefix("fixed:")
                    .or_else(|| other.strip_prefix("fixed=").or(Some(other)))
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown bandwidth method `{s}`")))?;
                Bandwidth::new(value, BandwidthMethod::Fixed(value))?;
                Ok(BandwidthMethod::Fixed(value))
            }
        }
    }
}

/// A kernel bandwidth in data units, tagged with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bandwidth {
    value: f64,
    method: BandwidthMethod,
}

impl Bandwidth {
    pub fn new(value: f64, method: BandwidthMethod) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self { value, method })
        } else {
            Err(Error::InvalidBandwidth(value))
        }
    }

    pub fn fixed(value: f64) -> Result<Self> {
        Self::new(value, BandwidthMethod::Fixed(value))
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn method(&self) -> BandwidthMethod {
        self.method
    }
}

pub fn select_bandwidth(samples: &[f64], method: BandwidthMethod) -> Result<Bandwidth> {
    if let BandwidthMethod::Fixed(b) = method {
        return Bandwidth::new(b, method);
    }
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            required: 2,
            got: samples.len(),
        });
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let sd = (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    if sd <= 0.0 || !sd.is_finite() {
        return Err(Error::ZeroVariance);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);

    let value = match method {
        BandwidthMethod::Silverman => 1.06 * robust_scale(sd, iqr, 1.34) * n.powf(-0.2),
        BandwidthMethod::Plugin => sheather_jones(&sorted, robust_scale(sd, iqr, 1.349))?,
        BandwidthMethod::Fixed(_) => unreachable!(),
    };
    Bandwidth::new(value, method)
}

// A zero IQR (heavy ties) would give a zero bandwidth; fall back to s.
fn robust_scale(sd: f64, iqr: f64, divisor: f64) -> f64 {
    let spread = iqr / divisor;
    if spread > 0.0 {
        sd.min(spread)
    } else {
        sd
    }
}

const SJ_BINS: usize = 1000;
const SJ_DELTA_MAX: f64 = 1000.0;

/// Pair counts by bin separation, used to approximate the double sums in
/// the density-functional estimates in O(bins^2).
struct BinnedPairs {
    n: f64,
    bin_width: f64,
    counts: Vec<f64>,
}

impl BinnedPairs {
    fn new(sorted: &[f64]) -> Self {
        let lo = sorted[0];
        let hi = sorted[sorted.len() - 1];
        let bin_width = (hi - lo) * 1.01 / SJ_BINS as f64;
        let mut occupancy = vec![0.0f64; SJ_BINS];
        for &x in sorted {
            let k = (((x - lo) / bin_width) as usize).min(SJ_BINS - 1);
            occupancy[k] += 1.0;
        }
        let mut counts = vec![0.0f64; SJ_BINS];
        counts[0] = occupancy.iter().map(|c| c * (c - 1.0) / 2.0).sum();
        for (d, slot) in counts.iter_mut().enumerate().skip(1) {
            *slot = occupancy[..SJ_BINS - d]
                .iter()
                .zip(&occupancy[d..])
                .map(|(a, b)| a * b)
                .sum();
        }
        Self {
            n: sorted.len() as f64,
            bin_width,
            counts,
        }
    }

    /// Estimate of the integral of f''^2 (fourth-derivative functional).
    fn psi4(&self, h: f64) -> f64 {
        let mut sum = 0.0;
        for (d, &c) in self.counts.iter().enumerate() {
            let delta = (d as f64 * self.bin_width / h).powi(2);
            if delta >= SJ_DELTA_MAX {
                break;
            }
            sum += c * (-delta / 2.0).exp() * (delta * delta - 6.0 * delta + 3.0);
        }
        let sum = 2.0 * sum + 3.0 * self.n;
        sum / (self.n * (self.n - 1.0) * h.powi(5) * (2.0 * PI).sqrt())
    }

    /// Sixth-derivative functional (negative for smooth densities).
    fn psi6(&self, h: f64) -> f64 {
        let mut sum = 0.0;
        for (d, &c) in self.counts.iter().enumerate() {
            let delta = (d as f64 * self.bin_width / h).powi(2);
            if delta >= SJ_DELTA_MAX {
                break;
            }
            sum += c * (-delta / 2.0).exp() * (delta.powi(3) - 15.0 * delta * delta + 45.0 * delta - 15.0);
        }
        let sum = 2.0 * sum - 15.0 * self.n;
        sum / (self.n * (self.n - 1.0) * h.powi(7) * (2.0 * PI).sqrt())
    }
}

fn sheather_jones(sorted: &[f64], scale: f64) -> Result<f64> {
    let pairs = BinnedPairs::new(sorted);
    let n = pairs.n;
    let a = 1.24 * scale * n.powf(-1.0 / 7.0);
    let b = 1.23 * scale * n.powf(-1.0 / 9.0);
    let c1 = 1.0 / (2.0 * PI.sqrt() * n);
    let td = -pairs.psi6(b);
    let alpha2 = 1.357 * (pairs.psi4(a) / td).powf(1.0 / 7.0);
    if !alpha2.is_finite() || alpha2 <= 0.0 {
        return Err(Error::BandwidthSolve);
    }
    let equation = |h: f64| (c1 / pairs.psi4(alpha2 * h.powf(5.0 / 7.0))).powf(0.2) - h;

    let hmax = 1.144 * scale * n.powf(-0.2);
    let (mut lo, mut hi) = (0.1 * hmax, hmax);
    let mut tries = 0;
    let brackets = |lo: f64, hi: f64| equation(lo) * equation(hi) <= 0.0;
    while !brackets(lo, hi) {
        tries += 1;
        if tries > 99 {
            return Err(Error::BandwidthSolve);
        }
        if tries % 2 == 1 {
            hi *= 1.2;
        } else {
            lo /= 1.2;
        }
    }
    let mut f_lo = equation(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = equation(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-10 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn normal(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn silverman_uses_sd_when_iqr_is_wide() {
        // Evenly spread values rescaled to s = 1 exactly; IQR/1.34 > 1 for
        // a uniform-like spread.
        let raw: Vec<f64> = (0..100).map(|k| k as f64).collect();
        let mean = 49.5;
        let sd = (raw.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 99.0).sqrt();
        let xs: Vec<f64> = raw.iter().map(|x| (x - mean) / sd).collect();
        let b = select_bandwidth(&xs, BandwidthMethod::Silverman).unwrap();
        let expected = 1.06 * 100f64.powf(-0.2);
        assert!((b.value() - expected).abs() < 1e-12);
        assert!((b.value() - 0.421994).abs() < 1e-6);
    }

    #[test]
    fn zero_variance_is_rejected() {
        let xs = vec![3.0; 50];
        assert!(matches!(
            select_bandwidth(&xs, BandwidthMethod::Silverman),
            Err(Error::ZeroVariance)
        ));
        assert!(matches!(
            select_bandwidth(&xs, BandwidthMethod::Plugin),
            Err(Error::ZeroVariance)
        ));
    }

    #[test]
    fn needs_two_samples() {
        assert!(matches!(
            select_bandwidth(&[1.0], BandwidthMethod::Silverman),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn fixed_echoes_value() {
        let b = select_bandwidth(&[], BandwidthMethod::Fixed(0.3)).unwrap();
        assert_eq!(b.value(), 0.3);
        assert!(select_bandwidth(&[], BandwidthMethod::Fixed(-1.0)).is_err());
        assert!(Bandwidth::fixed(f64::NAN).is_err());
    }

    #[test]
    fn plugin_matches_amise_optimum_on_gaussian() {
        let xs = normal(100_000, 7);
        let b = select_bandwidth(&xs, BandwidthMethod::Plugin).unwrap();
        let optimum = (4.0f64 / (3.0 * 1e5)).powf(0.2);
        assert!((optimum - 0.105922).abs() < 1e-6);
        assert!((b.value() / optimum - 1.0).abs() < 0.15, "b = {}", b.value());
    }

    #[test]
    fn plugin_is_smaller_for_bimodal_data() {
        let mut xs = normal(5000, 1);
        for (k, x) in xs.iter_mut().enumerate() {
            *x += if k % 2 == 0 { -3.0 } else { 3.0 };
        }
        let sj = select_bandwidth(&xs, BandwidthMethod::Plugin).unwrap().value();
        let rot = select_bandwidth(&xs, BandwidthMethod::Silverman).unwrap().value();
        assert!(sj > 0.0 && sj < 1.0, "{sj} {rot}");
    }

    #[test]
    fn parse_methods() {
        assert_eq!(
            "silverman".parse::<BandwidthMethod>().unwrap(),
            BandwidthMethod::Silverman
        );
        assert_eq!(
            "plugin".parse::<BandwidthMethod>().unwrap(),
            BandwidthMethod::Plugin
        );
        assert_eq!(
            "fixed:0.5".parse::<BandwidthMethod>().unwrap(),
            BandwidthMethod::Fixed(0.5)
        );
        assert!("bogus".parse::<BandwidthMethod>().is_err());
        assert!("fixed:0".parse::<BandwidthMethod>().is_err());
    }
}
