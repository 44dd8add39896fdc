use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fsanalysis::cli::{
    cmd_analyze, cmd_correlate, cmd_density, cmd_summary, ChannelInput, CommandReport, ConfigFile, Moment,
    RunConfig,
};
use fsanalysis::ingest::parse_iso8601;
use fsanalysis::synthetic::{self, DayLaw, Shape, StudyConfig};

#[derive(Parser)]
#[command(
    name = "fsanalysis",
    version,
    about = "Fisher-Shannon complexity of time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Min, quartiles, mean and max per channel.
    Summary(Common),
    /// FS metrics per window and per whole series.
    Analyze(Common),
    /// Permutation-tested correlation of window complexity with a covariate moment.
    Correlate {
        #[command(flatten)]
        common: Common,
        /// Metrics file written by `analyze`.
        #[arg(long)]
        metrics: PathBuf,
        /// Covariate as `id=path`.
        #[arg(long)]
        covariate: String,
        /// `mean` or `variance`.
        #[arg(long, default_value = "variance")]
        moment: String,
    },
    /// Histogram and KDE table for one channel.
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        channel: String,
        #[arg(long, default_value_t = 50)]
        bins: usize,
    },
    /// Write seeded synthetic input files.
    Synthetic(SyntheticArgs),
}

#[derive(Args)]
struct Common {
    /// TOML file with any of the settings below; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input channel as `id=path`; repeatable.
    #[arg(long = "channel-file", value_name = "ID=PATH")]
    channels: Vec<String>,
    #[arg(long)]
    time_column: Option<String>,
    #[arg(long)]
    value_column: Option<String>,
    /// `epoch` or `iso8601`.
    #[arg(long)]
    timestamp_format: Option<String>,
    #[arg(long)]
    delimiter: Option<String>,
    /// `daily` or `fixed`.
    #[arg(long)]
    window: Option<String>,
    /// Seconds east of UTC for daily windows.
    #[arg(long, allow_hyphen_values = true)]
    utc_offset: Option<i64>,
    #[arg(long)]
    window_seconds: Option<i64>,
    /// `silverman`, `plugin` or `fixed:<b>`.
    #[arg(long)]
    bandwidth: Option<String>,
    #[arg(long)]
    grid_size: Option<usize>,
    #[arg(long)]
    min_samples: Option<usize>,
    /// Analyse windows below the minimum size instead of flagging them.
    #[arg(long)]
    allow_insufficient: bool,
    #[arg(long)]
    permutations: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Process channels and windows on one thread.
    #[arg(long)]
    serial: bool,
}

impl Common {
    fn resolve(self) -> fsanalysis::Result<RunConfig> {
        let file = self.config.as_deref().map(ConfigFile::load).transpose()?;
        let flags = ConfigFile {
            channels: (!self.channels.is_empty()).then_some(self.channels),
            time_column: self.time_column,
            value_column: self.value_column,
            timestamp_format: self.timestamp_format,
            delimiter: self.delimiter,
            window: self.window,
            utc_offset: self.utc_offset,
            window_seconds: self.window_seconds,
            bandwidth: self.bandwidth,
            grid_size: self.grid_size,
            min_samples: self.min_samples,
            allow_insufficient: self.allow_insufficient.then_some(true),
            permutations: self.permutations,
            seed: self.seed,
            output_dir: self.out_dir,
            parallel: self.serial.then_some(false),
            ..ConfigFile::default()
        };
        RunConfig::resolve(file, flags)
    }
}

#[derive(Args)]
struct SyntheticArgs {
    /// `study` (seven levels plus covariates), or a single shape:
    /// `gaussian`, `laplace`, `logistic`, `mixture`.
    #[arg(long, default_value = "study")]
    preset: String,
    #[arg(long, default_value_t = 33)]
    days: usize,
    /// Seconds between samples.
    #[arg(long, default_value_t = 1)]
    step: i64,
    #[arg(long, default_value = "2016-12-28T00:00:00Z")]
    start: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "data")]
    out_dir: PathBuf,
}

fn synthetic(args: SyntheticArgs) -> fsanalysis::Result<CommandReport> {
    let start = parse_iso8601(&args.start)
        .ok_or_else(|| fsanalysis::Error::InvalidArgument(format!("bad start `{}`", args.start)))?;
    let outputs = if args.preset == "study" {
        let config = StudyConfig {
            start,
            days: args.days,
            step: args.step,
            seed: args.seed,
            ..StudyConfig::default()
        };
        synthetic::write_study(&args.out_dir, &config)?
    } else {
        let shape: Shape = args.preset.parse()?;
        let mut rng = synthetic::rng_for(args.seed, 0);
        let law = |_| DayLaw {
            shape,
            location: 0.0,
            scale: 1.0,
        };
        let series = synthetic::daily_series(shape.name(), "", start, args.days, args.step, &mut rng, law)?;
        let path = args.out_dir.join(format!("{}.csv", shape.name()));
        synthetic::write_series_csv(&path, &series)?;
        vec![path]
    };
    Ok(CommandReport {
        outputs,
        failures: Vec::new(),
    })
}

fn run(cli: Cli) -> fsanalysis::Result<CommandReport> {
    match cli.command {
        Command::Summary(common) => cmd_summary(&common.resolve()?),
        Command::Analyze(common) => cmd_analyze(&common.resolve()?),
        Command::Correlate {
            common,
            metrics,
            covariate,
            moment,
        } => {
            let covariate: ChannelInput = covariate.parse()?;
            cmd_correlate(
                &common.resolve()?,
                &metrics,
                &covariate,
                moment.parse::<Moment>()?,
            )
        }
        Command::Density {
            common,
            channel,
            bins,
        } => cmd_density(&common.resolve()?, &channel, bins),
        Command::Synthetic(args) => synthetic(args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(report) => {
            for path in &report.outputs {
                println!("{}", path.display());
            }
            for f in &report.failures {
                log::error!("{f}");
            }
            if report.success() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            log::error!("{e}");
            ExitCode::FAILURE
        }
    }
}
