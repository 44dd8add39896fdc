//! Seeded synthetic channels with known Fisher-Shannon behaviour.
//!
//! Analytic complexities of the unit shapes: Gaussian 1, Laplace `2e/pi`,
//! logistic `e^3 / (6 pi)`. Mixtures sit above 1.

use std::f64::consts::{E, PI};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::ingest::{TimeSeries, SECONDS_PER_DAY};
use crate::output::{sig6, CsvOutput};

pub const LAPLACE_COMPLEXITY: f64 = 2.0 * E / PI;

pub fn logistic_complexity() -> f64 {
    E.powi(3) / (6.0 * PI)
}

/// Distribution of a standardised draw before location/scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Gaussian,
    /// Standard Laplace, density `exp(-|x|) / 2`.
    Laplace,
    /// Standard logistic, scale 1.
    Logistic,
    /// `N(0, 1)` with probability `1 - weight`, else `N(offset, sd^2)`.
    GaussianMixture {
        weight: f64,
        offset: f64,
        sd: f64,
    },
    /// Unit-variance Laplace with probability `weight`, else `N(0, 1)`.
    /// `weight = 0` is exactly Gaussian.
    LaplaceBlend {
        weight: f64,
    },
}

impl Shape {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Shape::Gaussian => StandardNormal.sample(rng),
            Shape::Laplace => laplace(rng),
            Shape::Logistic => {
                let u: f64 = rng.random_range(f64::EPSILON..1.0);
                (u / (1.0 - u)).ln()
            }
            Shape::GaussianMixture { weight, offset, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                if rng.random::<f64>() < weight {
                    offset + sd * z
                } else {
                    z
                }
            }
            Shape::LaplaceBlend { weight } => {
                if rng.random::<f64>() < weight {
                    laplace(rng) / std::f64::consts::SQRT_2
                } else {
                    StandardNormal.sample(rng)
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Shape::Gaussian => "gaussian",
            Shape::Laplace => "laplace",
            Shape::Logistic => "logistic",
            Shape::GaussianMixture { .. } => "mixture",
            Shape::LaplaceBlend { .. } => "blend",
        }
    }
}

impl std::str::FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" | "normal" => Ok(Shape::Gaussian),
            "laplace" => Ok(Shape::Laplace),
            "logistic" => Ok(Shape::Logistic),
            "mixture" => Ok(Shape::GaussianMixture {
                weight: 0.3,
                offset: 2.5,
                sd: 0.6,
            }),
            other => Err(Error::InvalidArgument(format!("unknown shape `{other}`"))),
        }
    }
}

fn laplace<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random_range(-0.5..0.5);
    -u.signum() * (1.0 - 2.0 * u.abs()).max(f64::MIN_POSITIVE).ln()
}

/// Independent generator for `(seed, stream)`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn sample_values(shape: Shape, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_for(seed, 0);
    (0..n).map(|_| shape.sample(&mut rng)).collect()
}

/// Location, scale and shape of one day of a channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DayLaw {
    pub shape: Shape,
    pub location: f64,
    pub scale: f64,
}

/// A series of `days` whole days starting at `start`, one sample every
/// `step` seconds, where day `d` follows `law(d)`.
pub fn daily_series(
    channel_id: &str,
    units: &str,
    start: i64,
    days: usize,
    step: i64,
    rng: &mut ChaCha8Rng,
    mut law: impl FnMut(usize) -> DayLaw,
) -> Result<TimeSeries> {
    if step <= 0 || SECONDS_PER_DAY % step != 0 {
        return Err(Error::InvalidArgument(format!("step {step} must divide a day")));
    }
    let per_day = (SECONDS_PER_DAY / step) as usize;
    let mut timestamps = Vec::with_capacity(days * per_day);
    let mut values = Vec::with_capacity(days * per_day);
    for day in 0..days {
        let DayLaw {
            shape,
            location,
            scale,
        } = law(day);
        let day_start = start + day as i64 * SECONDS_PER_DAY;
        for k in 0..per_day {
            timestamps.push(day_start + k as i64 * step);
            values.push(location + scale * shape.sample(rng));
        }
    }
    TimeSeries::new(channel_id, units, timestamps, values)
}

/// Parameters of the seven-level mast study with two covariates.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub start: i64,
    pub days: usize,
    pub step: i64,
    pub seed: u64,
    pub levels: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            // 2016-12-28T00:00:00Z
            start: 1_482_883_200,
            days: 33,
            step: 1,
            seed: 1,
            levels: 7,
        }
    }
}

/// All channels of the synthetic study.
///
/// Level `c` (0 = lowest) mixes a Laplace component with weight
/// `(1 - c/levels) * (0.2 + 0.8 t_d)`, where `t_d` in `[0, 1]` is a daily
/// driver. `sonic_temp` has daily variance `0.5 + 3.5 t_d`, so daily
/// complexity tracks covariate variance and decreases with height.
/// `pressure` follows an unrelated random walk.
pub fn study_series(config: &StudyConfig) -> Result<Vec<TimeSeries>> {
    let mut driver_rng = rng_for(config.seed, 1000);
    let drivers: Vec<f64> = (0..config.days).map(|_| driver_rng.random::<f64>()).collect();
    let mut walk_rng = rng_for(config.seed, 1001);
    let mut level = 960.0;
    let pressure_means: Vec<f64> = (0..config.days)
        .map(|_| {
            let step: f64 = StandardNormal.sample(&mut walk_rng);
            level += 3.0 * step;
            level
        })
        .collect();

    let mut out = Vec::with_capacity(config.levels + 2);
    for c in 0..config.levels {
        let mut rng = rng_for(config.seed, c as u64);
        let height = c as f64 / config.levels as f64;
        out.push(daily_series(
            &format!("an{}", c + 1),
            "m/s",
            config.start,
            config.days,
            config.step,
            &mut rng,
            |d| DayLaw {
                shape: Shape::LaplaceBlend {
                    weight: (1.0 - height) * (0.2 + 0.8 * drivers[d]),
                },
                location: 0.6 + 0.35 * c as f64,
                scale: 0.3 + 0.3 * c as f64,
            },
        )?);
    }
    let mut rng = rng_for(config.seed, 900);
    out.push(daily_series(
        "sonic_temp",
        "degC",
        config.start,
        config.days,
        config.step,
        &mut rng,
        |d| DayLaw {
            shape: Shape::Gaussian,
            location: 2.0 + 0.1 * d as f64,
            scale: (0.5 + 3.5 * drivers[d]).sqrt(),
        },
    )?);
    let mut rng = rng_for(config.seed, 901);
    out.push(daily_series(
        "pressure",
        "hPa",
        config.start,
        config.days,
        config.step,
        &mut rng,
        |d| DayLaw {
            shape: Shape::Gaussian,
            location: pressure_means[d],
            scale: 0.8,
        },
    )?);
    Ok(out)
}

/// Write a series as `timestamp,value` CSV with epoch-second timestamps.
pub fn write_series_csv(path: &Path, series: &TimeSeries) -> Result<()> {
    let mut out = CsvOutput::create(path, &[])?;
    out.record(["timestamp", "value"])?;
    for (t, v) in series.timestamps().iter().zip(series.values()) {
        out.record([t.to_string(), sig6(*v)])?;
    }
    out.finish()
}

/// Write every study channel as `<channel>.csv` under `dir`.
pub fn write_study(dir: &Path, config: &StudyConfig) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    study_series(config)?
        .iter()
        .map(|s| {
            let path = dir.join(format!("{}.csv", s.channel_id()));
            write_series_csv(&path, s)?;
            Ok(path)
        })
        .collect()
}
