//! Fit a Gaussian KDE and read values off it.
//!
//! ```text
//! cargo run --release --example kde_fit
//! ```

use fsanalysis::kde::{fit_with, select_bandwidth, BandwidthMethod, EvalPath, FitOptions};
use fsanalysis::synthetic::{sample_values, Shape};

fn main() -> fsanalysis::Result<()> {
    let xs = sample_values(Shape::Gaussian, 50_000, 7);
    let b = select_bandwidth(&xs, BandwidthMethod::Silverman)?;
    let est = fit_with(&xs, b, &FitOptions::default())?;

    let (lo, hi) = est.support();
    println!(
        "L = {}, b = {:.5}, binned = {}",
        xs.len(),
        b.value(),
        est.is_binned()
    );
    println!(
        "grid [{lo:.3}, {hi:.3}] with {} nodes, mass {:.9}",
        est.grid().len(),
        est.mass()
    );
    for x in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        let (f, df) = est.evaluate(x);
        let phi = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        println!("x = {x:>4}: f = {f:.5} (normal pdf {phi:.5}), f' = {df:>8.5}");
    }

    // The same fit by direct summation, for comparison.
    let direct = fit_with(
        &xs,
        b,
        &FitOptions {
            path: EvalPath::Direct,
            ..FitOptions::default()
        },
    )?;
    let worst = est
        .density()
        .iter()
        .zip(direct.density())
        .map(|(a, d)| ((a - d) / d).abs())
        .fold(0.0, f64::max);
    println!("binned vs direct, worst relative difference {worst:.2e}");
    Ok(())
}
