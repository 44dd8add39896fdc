//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line per criterion and exits non-zero if any failed.
//!
//! Run alone with `cargo test --release --test acceptance`.

use std::f64::consts::{E, PI};
use std::path::Path;
use std::time::Instant;

use fsanalysis::cli::{
    channels_in_dir, cmd_analyze, cmd_correlate, cmd_density, cmd_summary, ChannelInput, Moment, RunConfig,
    CORRELATION_FILE,
};
use fsanalysis::fisher_shannon::{differential_entropy, metrics_of, FsMetrics};
use fsanalysis::ingest::partition_daily;
use fsanalysis::kde::{fit_with, select_bandwidth, BandwidthMethod, EvalPath, FitOptions, DEFAULT_GRID_SIZE};
use fsanalysis::stats::{daily_moments, permutation_test, permutation_test_with, PermutationMode};
use fsanalysis::synthetic::{
    rng_for, sample_values, study_series, write_study, Shape, StudyConfig, LAPLACE_COMPLEXITY,
};
use rand::Rng;

/// Largest `|mass - 1|` over every fit made by the suite.
#[derive(Default)]
struct MassLog {
    worst: f64,
    fits: usize,
}

impl MassLog {
    fn metrics(&mut self, xs: &[f64]) -> FsMetrics {
        let b = select_bandwidth(xs, BandwidthMethod::Silverman).unwrap();
        let est = fit_with(xs, b, &FitOptions::default()).unwrap();
        self.record(est.mass());
        metrics_of(&est).unwrap()
    }

    fn record(&mut self, mass: f64) {
        self.worst = self.worst.max((mass - 1.0).abs());
        self.fits += 1;
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn gaussian_calibration(log: &mut MassLog) -> Outcome {
    let t = Instant::now();
    let cs: Vec<f64> = (0..20)
        .map(|s| {
            log.metrics(&sample_values(Shape::Gaussian, 86_400, 1000 + s))
                .complexity
        })
        .collect();
    let secs = t.elapsed().as_secs_f64();
    let mean = cs.iter().sum::<f64>() / 20.0;
    let (lo, hi) = min_max(&cs);
    outcome(
        (0.97..=1.05).contains(&mean) && lo >= 0.93 && hi <= 1.12 && secs < 30.0,
        format!("mean C {mean:.4}, range [{lo:.4}, {hi:.4}], {secs:.1} s"),
    )
}

fn shapes() -> [Shape; 4] {
    [
        Shape::Gaussian,
        Shape::Laplace,
        Shape::Logistic,
        "mixture".parse().unwrap(),
    ]
}

/// Complexities at L = 1e5 for 10 seeds of each shape.
fn shape_complexities(log: &mut MassLog) -> Vec<(Shape, Vec<f64>)> {
    shapes()
        .into_iter()
        .map(|shape| {
            let cs = (0..10)
                .map(|s| log.metrics(&sample_values(shape, 100_000, 2000 + s)).complexity)
                .collect();
            (shape, cs)
        })
        .collect()
}

fn isoperimetric(table: &[(Shape, Vec<f64>)]) -> Outcome {
    let parts: Vec<String> = table
        .iter()
        .map(|(shape, cs)| format!("{} min {:.4}", shape.name(), min_max(cs).0))
        .collect();
    let pass = table.iter().all(|(_, cs)| cs.iter().all(|&c| c >= 0.95));
    outcome(pass, parts.join(", "))
}

fn analytic_oracles(table: &[(Shape, Vec<f64>)]) -> Outcome {
    let logistic = E.powi(3) / (6.0 * PI);
    let mut pass = true;
    let mut parts = Vec::new();
    for (shape, target) in [(Shape::Laplace, LAPLACE_COMPLEXITY), (Shape::Logistic, logistic)] {
        let cs = &table.iter().find(|(s, _)| *s == shape).unwrap().1;
        let worst = cs.iter().map(|c| (c / target - 1.0).abs()).fold(0.0, f64::max);
        pass &= worst <= 0.10;
        let (lo, hi) = min_max(cs);
        parts.push(format!(
            "{} C in [{lo:.4}, {hi:.4}] vs {target:.4} (worst {:.1}%)",
            shape.name(),
            100.0 * worst
        ));
    }
    outcome(pass, parts.join(", "))
}

fn scaling_laws(log: &mut MassLog) -> Outcome {
    let xs = sample_values(Shape::Gaussian, 100_000, 3000);
    let base = log.metrics(&xs);
    let mut worst = 0.0f64;
    for a in [0.1, 0.5, 2.0, 10.0] {
        let scaled: Vec<f64> = xs.iter().map(|x| a * x).collect();
        let m = log.metrics(&scaled);
        let n_err = (m.entropy_power / base.entropy_power / (a * a) - 1.0).abs();
        let i_err = (m.fisher_information * a * a / base.fisher_information - 1.0).abs();
        let c_err = ((m.complexity - base.complexity) / base.complexity).abs();
        worst = worst.max(n_err).max(i_err).max(c_err);
    }
    outcome(worst < 0.02, format!("worst relative deviation {worst:.2e}"))
}

fn fim_direct(log: &mut MassLog) -> Outcome {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (k, sigma) in [0.5, 1.0, 3.0].into_iter().enumerate() {
        let xs: Vec<f64> = sample_values(Shape::Gaussian, 100_000, 4000 + k as u64)
            .into_iter()
            .map(|x| sigma * x)
            .collect();
        let i = log.metrics(&xs).fisher_information;
        let err = (i * sigma * sigma - 1.0).abs();
        worst = worst.max(err);
        parts.push(format!("sigma {sigma}: I {i:.4}"));
    }
    outcome(
        worst <= 0.05,
        format!("{} (worst {:.2}%)", parts.join(", "), 100.0 * worst),
    )
}

/// Leave-in resubstitution estimate `-(1/L) sum ln f(x_i)` by direct
/// summation, independent of the library's grid.
fn resubstitution_entropy(xs: &[f64], b: f64) -> f64 {
    let norm = 1.0 / (xs.len() as f64 * b * (2.0 * PI).sqrt());
    let total: f64 = xs
        .iter()
        .map(|&x| {
            let f: f64 = xs
                .iter()
                .map(|&xi| (-0.5 * ((x - xi) / b).powi(2)).exp())
                .sum::<f64>()
                * norm;
            f.ln()
        })
        .sum();
    -total / xs.len() as f64
}

fn entropy_cross_oracle(log: &mut MassLog) -> Outcome {
    let mut worst = 0.0f64;
    for s in 0..5 {
        let xs = sample_values(Shape::Gaussian, 2000, 5000 + s);
        let b = select_bandwidth(&xs, BandwidthMethod::Silverman).unwrap();
        let est = fit_with(&xs, b, &FitOptions::default()).unwrap();
        log.record(est.mass());
        let gap = (differential_entropy(&est) - resubstitution_entropy(&xs, b.value())).abs();
        worst = worst.max(gap);
    }
    outcome(
        worst <= 0.03,
        format!("worst |H_grid - H_resub| {worst:.4} nats over 5 seeds"),
    )
}

/// Direct kernel sum at one point, split across threads by the caller.
fn direct_density(xs: &[f64], b: f64, x: f64) -> f64 {
    let s: f64 = xs.iter().map(|&xi| (-0.5 * ((x - xi) / b).powi(2)).exp()).sum();
    s / (xs.len() as f64 * b * (2.0 * PI).sqrt())
}

fn kde_exactness(log: &mut MassLog) -> Outcome {
    let mut rng = rng_for(6000, 0);
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut worst = 0.0f64;
    let mut sizes = Vec::new();
    for trial in 0..4u64 {
        let n = if trial == 0 {
            100_000
        } else {
            rng.random_range(10_001..=100_000)
        };
        let shape = shapes()[trial as usize % 4];
        let xs = sample_values(shape, n, 6000 + trial);
        let b = select_bandwidth(&xs, BandwidthMethod::Silverman).unwrap();
        let est = fit_with(
            &xs,
            b,
            &FitOptions {
                grid_size: DEFAULT_GRID_SIZE,
                path: EvalPath::Binned,
            },
        )
        .unwrap();
        assert!(est.is_binned());
        log.record(est.mass());
        let grid = est.grid();
        let chunk = grid.len().div_ceil(threads);
        let oracle: Vec<f64> = std::thread::scope(|scope| {
            let handles: Vec<_> = grid
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(|| {
                        part.iter()
                            .map(|&x| direct_density(&xs, b.value(), x))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
        });
        for (got, want) in est.density().iter().zip(&oracle) {
            worst = worst.max(((got - want) / want).abs());
        }
        sizes.push(n.to_string());
    }
    let mass_ok = log.worst <= 1e-3;
    outcome(
        worst <= 1e-6 && mass_ok,
        format!(
            "L = {{{}}}: worst relative error {worst:.2e}; worst |mass - 1| {:.2e} over {} fits",
            sizes.join(", "),
            log.worst,
            log.fits
        ),
    )
}

/// Every ordering of `0..n`, lexicographic.
fn all_orderings(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in all_orderings(n - 1) {
            let mut order = vec![first];
            order.extend(rest.into_iter().map(|k| if k >= first { k + 1 } else { k }));
            out.push(order);
        }
    }
    out
}

fn textbook_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

fn permutation_exactness() -> Outcome {
    let orderings = all_orderings(5);
    let mut mismatches = 0;
    let datasets: Vec<(Vec<f64>, Vec<f64>)> = (0..20u64)
        .map(|s| {
            let mut rng = rng_for(7000 + s, 0);
            let x: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
            // Integer-valued y in half the sets forces exact ties among |r|.
            let y: Vec<f64> = if s % 2 == 0 {
                (0..5).map(|_| rng.random_range(0..3) as f64).collect()
            } else {
                (0..5).map(|_| rng.random_range(-1.0..1.0)).collect()
            };
            (x, y)
        })
        .chain([(vec![1.0, 2.0, 3.0, 4.0, 5.0], vec![2.0, 1.0, 4.0, 3.0, 5.0])])
        .filter(|(_, y)| y.iter().any(|v| *v != y[0]))
        .collect();
    for (x, y) in &datasets {
        let r_obs = textbook_pearson(x, y).abs();
        let hits = orderings
            .iter()
            .filter(|order| {
                let yp: Vec<f64> = order.iter().map(|&k| y[k]).collect();
                textbook_pearson(x, &yp).abs() >= r_obs - 1e-12
            })
            .count();
        let oracle = hits as f64 / orderings.len() as f64;
        let report = permutation_test_with(x, y, PermutationMode::Exhaustive, 0, false).unwrap();
        if report.p_value.to_bits() != oracle.to_bits() || report.permutations != 120 {
            mismatches += 1;
        }
    }
    let x: Vec<f64> = (0..50).map(|k| k as f64).collect();
    let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
    let floor = permutation_test(&x, &y, 999, 1).unwrap().p_value;
    outcome(
        mismatches == 0 && floor == 0.001,
        format!(
            "{} datasets at n = 5, {mismatches} mismatches vs enumeration; p floor at R = 999 is {floor}",
            datasets.len()
        ),
    )
}

fn ordering(log: &mut MassLog) -> Outcome {
    let mut ordered = 0;
    let mut tightest = f64::INFINITY;
    for seed in 0..10u64 {
        let cs: Vec<f64> = (0..7)
            .map(|c| {
                // Laplace weight 1, 5/6, ..., 0: the last channel is Gaussian.
                let shape = Shape::LaplaceBlend {
                    weight: 1.0 - c as f64 / 6.0,
                };
                let mut rng = rng_for(8000 + seed, c);
                let xs: Vec<f64> = (0..86_400).map(|_| shape.sample(&mut rng)).collect();
                log.metrics(&xs).complexity
            })
            .collect();
        let gaps: Vec<f64> = cs.windows(2).map(|w| w[0] - w[1]).collect();
        tightest = tightest.min(gaps.iter().cloned().fold(f64::INFINITY, f64::min));
        if gaps.iter().all(|g| *g > 0.0) {
            ordered += 1;
        }
    }
    outcome(
        ordered >= 9,
        format!("strictly decreasing in {ordered}/10 seeds, smallest step {tightest:.4}"),
    )
}

/// `(r, p)` from the correlation file row of `channel`.
fn correlation_row(path: &Path, channel: &str) -> (f64, f64) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let row: Vec<&str> = lines
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|f| f[0] == channel)
        .unwrap();
    (
        row[col("r")].parse().unwrap(),
        row[col("p_value")].parse().unwrap(),
    )
}

fn correlation_pipeline(study_output: &Path, log: &mut MassLog) -> Outcome {
    let (r, p) = correlation_row(&study_output.join(CORRELATION_FILE), "an1");

    // Independent covariate: a random walk in the pressure channel's daily
    // mean, unrelated to the drivers of an1.
    let mut above = 0;
    for trial in 0..20u64 {
        let config = StudyConfig {
            step: 8,
            levels: 1,
            seed: 9000 + trial,
            ..StudyConfig::default()
        };
        let series = study_series(&config).unwrap();
        let (an1, pressure) = (&series[0], &series[2]);
        let windows = partition_daily(an1, 0, 1000);
        let cs: Vec<f64> = windows
            .iter()
            .map(|w| log.metrics(an1.window_values(w)).complexity)
            .collect();
        let pressure_windows = partition_daily(pressure, 0, 1000);
        let means: Vec<f64> = daily_moments(pressure, &pressure_windows)
            .iter()
            .map(|m| m.mean)
            .collect();
        if permutation_test(&cs, &means, 999, trial).unwrap().p_value > 0.05 {
            above += 1;
        }
    }
    outcome(
        r > 0.9 && p == 0.001 && above >= 18,
        format!("driven covariate r {r}, p {p}; independent covariate p > 0.05 in {above}/20"),
    )
}

fn run_study_commands(data: &Path, out: &Path, parallel: bool) -> f64 {
    std::fs::create_dir_all(out).unwrap();
    let all = channels_in_dir(data, &[]).unwrap();
    let levels = channels_in_dir(data, &["sonic_temp", "pressure"]).unwrap();
    let base = RunConfig {
        output_dir: out.to_path_buf(),
        parallel,
        ..RunConfig::default()
    };
    let with = |channels: Vec<ChannelInput>| RunConfig {
        channels,
        ..base.clone()
    };

    assert!(cmd_summary(&with(all.clone())).unwrap().success());
    let analyze = with(levels.clone());
    let t = Instant::now();
    assert!(cmd_analyze(&analyze).unwrap().success());
    let secs = t.elapsed().as_secs_f64();
    let covariate = all.iter().find(|c| c.id == "sonic_temp").unwrap();
    let metrics = out.join(fsanalysis::cli::METRICS_FILE);
    assert!(cmd_correlate(&analyze, &metrics, covariate, Moment::Variance)
        .unwrap()
        .success());
    assert!(cmd_density(&analyze, "an1", 50).unwrap().success());
    secs
}

fn identical_dirs(a: &Path, b: &Path) -> (bool, usize) {
    let mut names: Vec<_> = std::fs::read_dir(a)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    let same = names
        .iter()
        .all(|n| std::fs::read(a.join(n)).unwrap() == std::fs::read(b.join(n)).unwrap())
        && std::fs::read_dir(b).unwrap().count() == names.len();
    (same, names.len())
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

fn main() {
    let mut log = MassLog::default();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();

    // The full-scale study backs criteria 10 to 12.
    let scratch = tempfile::tempdir().unwrap();
    let data = scratch.path().join("data");
    write_study(&data, &StudyConfig::default()).unwrap();
    let parallel_out = scratch.path().join("parallel");
    let serial_out = scratch.path().join("serial");
    let analyze_secs = run_study_commands(&data, &parallel_out, true);
    let serial_secs = run_study_commands(&data, &serial_out, false);

    results.push((1, "Gaussian calibration", gaussian_calibration(&mut log)));
    let table = shape_complexities(&mut log);
    results.push((2, "isoperimetric inequality", isoperimetric(&table)));
    results.push((3, "analytic oracles", analytic_oracles(&table)));
    results.push((4, "scaling laws", scaling_laws(&mut log)));
    results.push((5, "Fisher information direct check", fim_direct(&mut log)));
    results.push((6, "entropy cross-oracle", entropy_cross_oracle(&mut log)));
    results.push((8, "permutation test exactness", permutation_exactness()));
    results.push((9, "ordering property", ordering(&mut log)));
    results.push((
        10,
        "correlation pipeline",
        correlation_pipeline(&parallel_out, &mut log),
    ));
    let (same, files) = identical_dirs(&serial_out, &parallel_out);
    results.push((
        11,
        "determinism",
        outcome(
            same,
            format!("{files} output files, serial and parallel byte-identical: {same}"),
        ),
    ));
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    results.push((
        12,
        "throughput",
        outcome(
            analyze_secs < 300.0,
            format!("analyze 7 x 33 x 86400 in {analyze_secs:.1} s on {cores} core(s) (serial run {serial_secs:.1} s)"),
        ),
    ));
    // Last, so the mass check covers every fit above.
    results.push((7, "KDE exactness and normalisation", kde_exactness(&mut log)));
    results.sort_by_key(|(k, _, _)| *k);

    let mut failed = 0;
    for (k, name, o) in &results {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {k:>2} {verdict} {name}: {}", o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
