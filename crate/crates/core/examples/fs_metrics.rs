//! Entropy, entropy power, Fisher information and complexity of synthetic
//! shapes next to their closed forms.
//!
//! ```text
//! cargo run --release --example fs_metrics
//! ```

use fsanalysis::fisher_shannon::{analyze_window, FsConfig};
use fsanalysis::kde::BandwidthMethod;
use fsanalysis::synthetic::{logistic_complexity, sample_values, Shape, LAPLACE_COMPLEXITY};

fn main() -> fsanalysis::Result<()> {
    let cases = [
        (Shape::Gaussian, Some(1.0)),
        (Shape::Laplace, Some(LAPLACE_COMPLEXITY)),
        (Shape::Logistic, Some(logistic_complexity())),
        ("mixture".parse()?, None),
    ];
    for bandwidth in [BandwidthMethod::Silverman, BandwidthMethod::Plugin] {
        let config = FsConfig {
            bandwidth,
            ..FsConfig::default()
        };
        println!("bandwidth: {bandwidth}");
        println!(
            "  {:<10} {:>8} {:>8} {:>8} {:>8} {:>8}",
            "shape", "H", "N", "I", "C", "exact C"
        );
        for (shape, exact) in cases {
            let m = analyze_window(&sample_values(shape, 100_000, 1), &config)?;
            let exact = exact.map_or("-".to_string(), |c| format!("{c:.4}"));
            println!(
                "  {:<10} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8}",
                shape.name(),
                m.entropy,
                m.entropy_power,
                m.fisher_information,
                m.complexity,
                exact
            );
        }
    }
    Ok(())
}
