//! Read a sensor CSV, cut it into UTC days and compute per-day metrics.
//!
//! ```text
//! cargo run --release --example daily_windows
//! ```

use std::io::Write;

use fsanalysis::fisher_shannon::{analyze_window, FsConfig};
use fsanalysis::ingest::{read_csv, IngestConfig, WindowPolicy};
use fsanalysis::synthetic::{rng_for, Shape};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Three days at one sample every 10 s with a gap on the second day,
    // a few blank and non-numeric cells, and a short fourth day.
    let dir = std::env::temp_dir().join("fsanalysis-daily-windows");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("wind.csv");
    let mut file = std::fs::File::create(&path)?;
    let mut rng = rng_for(11, 0);
    let mut text = String::from("timestamp,value\n");
    for t in (0..3 * 86_400 + 7_200).step_by(10) {
        if (100_000..120_000).contains(&t) {
            continue;
        }
        let v = 4.0 + Shape::Laplace.sample(&mut rng);
        match t % 50_000 {
            0 => text.push_str(&format!("{t},\n")),
            10 => text.push_str(&format!("{t},n/a\n")),
            _ => text.push_str(&format!("{t},{v:.4}\n")),
        }
    }
    file.write_all(text.as_bytes())?;

    let config = IngestConfig {
        channel_id: "wind".into(),
        units: "m/s".into(),
        ..IngestConfig::default()
    };
    let (series, diagnostics) = read_csv(&path, &config)?;
    println!("{diagnostics}");

    let policy = WindowPolicy::Daily { utc_offset: 0 };
    for w in policy.partition(&series, 1000) {
        let values = series.window_values(&w);
        if w.insufficient {
            println!(
                "[{}, {}) {:>5} samples: insufficient",
                w.start,
                w.end,
                values.len()
            );
            continue;
        }
        let m = analyze_window(values, &FsConfig::default())?;
        println!(
            "[{}, {}) {:>5} samples: C = {:.4}",
            w.start,
            w.end,
            values.len(),
            m.complexity
        );
    }
    Ok(())
}
