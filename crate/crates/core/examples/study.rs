//! The whole workflow on the synthetic seven-level study: write the input
//! files, summarise, analyse per day, correlate daily complexity with the
//! temperature variance and export one density table.
//!
//! ```text
//! cargo run --release --example study -- [out_dir]
//! ```
//!
//! Uses a 10 s sampling step to stay quick; the command-line tool runs the
//! same steps at full rate.

use std::path::PathBuf;

use fsanalysis::cli::{
    channels_in_dir, cmd_analyze, cmd_correlate, cmd_density, cmd_summary, Moment, RunConfig, METRICS_FILE,
};
use fsanalysis::synthetic::{write_study, StudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("fsanalysis-study"), PathBuf::from);
    let data = out.join("data");
    write_study(
        &data,
        &StudyConfig {
            step: 10,
            ..StudyConfig::default()
        },
    )?;

    let all = channels_in_dir(&data, &[])?;
    let levels = channels_in_dir(&data, &["sonic_temp", "pressure"])?;
    let config = RunConfig {
        output_dir: out.clone(),
        channels: levels,
        ..RunConfig::default()
    };

    cmd_summary(&RunConfig {
        channels: all.clone(),
        ..config.clone()
    })?;
    cmd_analyze(&config)?;
    let covariate = all
        .iter()
        .find(|c| c.id == "sonic_temp")
        .expect("study writes sonic_temp");
    let report = cmd_correlate(&config, &out.join(METRICS_FILE), covariate, Moment::Variance)?;
    cmd_density(&config, "an1", 50)?;

    println!("outputs in {}", out.display());
    let correlation = std::fs::read_to_string(&report.outputs[0])?;
    for line in correlation.lines().filter(|l| !l.starts_with('#')) {
        println!("{line}");
    }
    Ok(())
}
