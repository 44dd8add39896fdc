//! Rule-of-thumb and Sheather-Jones bandwidths on a few shapes.
//!
//! ```text
//! cargo run --release --example bandwidth
//! ```

use fsanalysis::kde::{select_bandwidth, BandwidthMethod};
use fsanalysis::synthetic::{sample_values, Shape};

fn main() -> fsanalysis::Result<()> {
    let shapes = [
        Shape::Gaussian,
        Shape::Laplace,
        Shape::Logistic,
        "mixture".parse()?,
    ];
    println!("{:<10} {:>8} {:>10} {:>10}", "shape", "L", "silverman", "plugin");
    for shape in shapes {
        for n in [1_000, 100_000] {
            let xs = sample_values(shape, n, 3);
            let rot = select_bandwidth(&xs, BandwidthMethod::Silverman)?;
            let sj = select_bandwidth(&xs, BandwidthMethod::Plugin)?;
            println!(
                "{:<10} {n:>8} {:>10.5} {:>10.5}",
                shape.name(),
                rot.value(),
                sj.value()
            );
        }
    }
    Ok(())
}
