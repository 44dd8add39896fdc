//! Histogram next to the fitted KDE at the bin centers.
//!
//! ```text
//! cargo run --release --example density_table
//! ```

use fsanalysis::kde::{fit, select_bandwidth, BandwidthMethod, DEFAULT_GRID_SIZE};
use fsanalysis::stats::density_export;
use fsanalysis::synthetic::{sample_values, Shape};

fn main() -> fsanalysis::Result<()> {
    let xs = sample_values("mixture".parse::<Shape>()?, 20_000, 4);
    let b = select_bandwidth(&xs, BandwidthMethod::Plugin)?;
    let est = fit(&xs, b, DEFAULT_GRID_SIZE)?;
    println!("{:>9} {:>9} {:>9}", "center", "hist", "kde");
    for row in density_export(&est, 25)? {
        let bar = "#".repeat((row.hist_density * 120.0).round() as usize);
        println!(
            "{:>9.4} {:>9.5} {:>9.5} {bar}",
            row.bin_center, row.hist_density, row.kde_density
        );
    }
    Ok(())
}
