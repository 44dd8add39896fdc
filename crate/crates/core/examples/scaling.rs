//! How the measures respond to rescaling the data: N scales with a^2, I
//! with 1/a^2, and C stays put.
//!
//! ```text
//! cargo run --release --example scaling
//! ```

use fsanalysis::fisher_shannon::{analyze_window, FsConfig};
use fsanalysis::synthetic::{sample_values, Shape};

fn main() -> fsanalysis::Result<()> {
    let xs = sample_values(Shape::Gaussian, 20_000, 5);
    let base = analyze_window(&xs, &FsConfig::default())?;
    println!(
        "{:>6} {:>12} {:>12} {:>10}",
        "a", "N(aX)/N/a^2", "I(aX)a^2/I", "C"
    );
    for a in [0.1, 0.5, 1.0, 2.0, 10.0] {
        let scaled: Vec<f64> = xs.iter().map(|x| a * x).collect();
        let m = analyze_window(&scaled, &FsConfig::default())?;
        println!(
            "{a:>6} {:>12.9} {:>12.9} {:>10.6}",
            m.entropy_power / base.entropy_power / (a * a),
            m.fisher_information * a * a / base.fisher_information,
            m.complexity
        );
    }
    Ok(())
}
