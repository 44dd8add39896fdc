//! Command implementations behind the `fsanalysis` binary: configuration,
//! per-channel orchestration and file emission.
//!
//! Every output file starts with `# key=value` provenance lines (tool
//! version, config hash, bandwidth method, seed, ...) followed by a CSV
//! header row. Numbers carry 6 significant digits. Outputs are identical
//! whether channels and windows are processed serially or in parallel.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fisher_shannon::{analyze_window, FsConfig, FsMetrics};
use crate::ingest::{
    read_csv, IngestConfig, TimeSeries, TimestampFormat, WindowPolicy, DEFAULT_MIN_WINDOW_SAMPLES,
};
use crate::kde::{fit, select_bandwidth, BandwidthMethod, EvalPath, DEFAULT_GRID_SIZE};
use crate::output::{sig6, sig6_opt, CsvOutput};
use crate::stats::{
    daily_moments, density_export, permutation_test_with, summarize, PermutationMode, DEFAULT_PERMUTATIONS,
};

pub const TOOL_NAME: &str = "fsanalysis";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const SUMMARY_FILE: &str = "summary.csv";
pub const METRICS_FILE: &str = "metrics.csv";
pub const CORRELATION_FILE: &str = "correlation.csv";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelInput {
    pub id: String,
    pub path: PathBuf,
}

impl std::str::FromStr for ChannelInput {
    type Err = Error;

    /// `id=path`
    fn from_str(s: &str) -> Result<Self> {
        let (id, path) = s
            .split_once('=')
            .filter(|(id, path)| !id.is_empty() && !path.is_empty())
            .ok_or_else(|| Error::Config(format!("channel must be `id=path`, got `{s}`")))?;
        Ok(Self {
            id: id.trim().to_string(),
            path: PathBuf::from(path.trim()),
        })
    }
}

/// Settings of a run. Build it from a [`ConfigFile`] layered under
/// command-line overrides with [`RunConfig::resolve`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub channels: Vec<ChannelInput>,
    pub time_column: String,
    pub value_column: String,
    pub timestamp_format: TimestampFormat,
    pub delimiter: u8,
    pub unparseable_tolerance: f64,
    pub window: WindowPolicy,
    pub bandwidth: BandwidthMethod,
    pub grid_size: usize,
    pub min_samples: usize,
    /// Analyse windows below `min_samples` instead of flagging them.
    pub allow_insufficient: bool,
    pub permutations: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            channels: Vec::new(),
            time_column: "timestamp".into(),
            value_column: "value".into(),
            timestamp_format: TimestampFormat::EpochSeconds,
            delimiter: b',',
            unparseable_tolerance: 0.01,
            window: WindowPolicy::default(),
            bandwidth: BandwidthMethod::Silverman,
            grid_size: DEFAULT_GRID_SIZE,
            min_samples: DEFAULT_MIN_WINDOW_SAMPLES,
            allow_insufficient: false,
            permutations: DEFAULT_PERMUTATIONS,
            seed: 1,
            output_dir: PathBuf::from("."),
            parallel: true,
        }
    }
}

/// Optional settings, as read from a TOML config file or collected from
/// command-line flags.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// `id=path` entries.
    pub channels: Option<Vec<String>>,
    pub time_column: Option<String>,
    pub value_column: Option<String>,
    /// `epoch` or `iso8601`
    pub timestamp_format: Option<String>,
    pub delimiter: Option<String>,
    pub unparseable_tolerance: Option<f64>,
    /// `daily` or `fixed`
    pub window: Option<String>,
    pub utc_offset: Option<i64>,
    pub window_seconds: Option<i64>,
    pub window_origin: Option<i64>,
    /// `silverman`, `plugin` or `fixed:<b>`
    pub bandwidth: Option<String>,
    pub grid_size: Option<usize>,
    pub min_samples: Option<usize>,
    pub allow_insufficient: Option<bool>,
    pub permutations: Option<usize>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub parallel: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: ConfigFile) -> ConfigFile {
        macro_rules! pick {
            ($($field:ident),*) => { ConfigFile { $($field: self.$field.or(base.$field)),* } };
        }
        pick!(
            channels,
            time_column,
            value_column,
            timestamp_format,
            delimiter,
            unparseable_tolerance,
            window,
            utc_offset,
            window_seconds,
            window_origin,
            bandwidth,
            grid_size,
            min_samples,
            allow_insufficient,
            permutations,
            seed,
            output_dir,
            parallel
        )
    }
}

impl RunConfig {
    /// Layer `overrides` over `file` over the defaults, then validate.
    pub fn resolve(file: Option<ConfigFile>, overrides: ConfigFile) -> Result<Self> {
        let c = overrides.over(file.unwrap_or_default());
        let d = RunConfig::default();
        let channels = c
            .channels
            .unwrap_or_default()
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<ChannelInput>>>()?;
        let timestamp_format = match c.timestamp_format.as_deref() {
            None | Some("epoch") => TimestampFormat::EpochSeconds,
            Some("iso8601") | Some("iso") => TimestampFormat::Iso8601,
            Some(other) => return Err(Error::Config(format!("unknown timestamp format `{other}`"))),
        };
        let delimiter = match c.delimiter.as_deref() {
            None => d.delimiter,
            Some("\\t") | Some("tab") => b'\t',
            Some(s) if s.len() == 1 => s.as_bytes()[0],
            Some(s) => return Err(Error::Config(format!("delimiter must be one byte, got `{s}`"))),
        };
        let window = match c.window.as_deref() {
            None | Some("daily") => WindowPolicy::Daily {
                utc_offset: c.utc_offset.unwrap_or(0),
            },
            Some("fixed") => WindowPolicy::Fixed {
                seconds: c
                    .window_seconds
                    .ok_or_else(|| Error::Config("fixed windows need window_seconds".into()))?,
                origin: c.window_origin.unwrap_or(0),
            },
            Some(other) => return Err(Error::Config(format!("unknown window policy `{other}`"))),
        };
        let bandwidth = match c.bandwidth {
            Some(s) => s.parse()?,
            None => d.bandwidth,
        };
        let config = RunConfig {
            channels,
            time_column: c.time_column.unwrap_or(d.time_column),
            value_column: c.value_column.unwrap_or(d.value_column),
            timestamp_format,
            delimiter,
            unparseable_tolerance: c.unparseable_tolerance.unwrap_or(d.unparseable_tolerance),
            window,
            bandwidth,
            grid_size: c.grid_size.unwrap_or(d.grid_size),
            min_samples: c.min_samples.unwrap_or(d.min_samples),
            allow_insufficient: c.allow_insufficient.unwrap_or(d.allow_insufficient),
            permutations: c.permutations.unwrap_or(d.permutations),
            seed: c.seed.unwrap_or(d.seed),
            output_dir: c.output_dir.unwrap_or(d.output_dir),
            parallel: c.parallel.unwrap_or(d.parallel),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let mut ids = HashSet::new();
        let mut paths = HashSet::new();
        for ch in &self.channels {
            if !ids.insert(&ch.id) {
                return Err(Error::Config(format!("duplicate channel id `{}`", ch.id)));
            }
            if !paths.insert(&ch.path) {
                return Err(Error::Config(format!("path {} used twice", ch.path.display())));
            }
        }
        if self.grid_size < crate::kde::MIN_GRID_SIZE {
            return Err(Error::GridTooSmall(self.grid_size));
        }
        if self.min_samples < 2 {
            return Err(Error::Config("min_samples must be at least 2".into()));
        }
        if self.permutations == 0 {
            return Err(Error::Config("permutations must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.unparseable_tolerance) {
            return Err(Error::Config("unparseable_tolerance must lie in [0, 1]".into()));
        }
        if let WindowPolicy::Fixed { seconds, .. } = self.window {
            if seconds <= 0 {
                return Err(Error::Config("window_seconds must be positive".into()));
            }
        }
        Ok(())
    }

    /// Short digest of every setting that affects results. Output location
    /// and parallelism are excluded.
    pub fn hash(&self) -> String {
        let mut canonical = String::new();
        for ch in &self.channels {
            canonical.push_str(&format!("channel={}={}\n", ch.id, ch.path.display()));
        }
        canonical.push_str(&format!(
            "time_column={}\nvalue_column={}\ntimestamp_format={:?}\ndelimiter={}\n\
             unparseable_tolerance={}\nwindow={}\nbandwidth={}\ngrid_size={}\n\
             min_samples={}\nallow_insufficient={}\npermutations={}\nseed={}\n",
            self.time_column,
            self.value_column,
            self.timestamp_format,
            self.delimiter,
            self.unparseable_tolerance,
            self.window,
            self.bandwidth,
            self.grid_size,
            self.min_samples,
            self.allow_insufficient,
            self.permutations,
            self.seed
        ));
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn ingest_config(&self, channel: &ChannelInput) -> IngestConfig {
        IngestConfig {
            channel_id: channel.id.clone(),
            units: String::new(),
            time_column: self.time_column.clone(),
            value_column: self.value_column.clone(),
            timestamp_format: self.timestamp_format,
            delimiter: self.delimiter,
            unparseable_tolerance: self.unparseable_tolerance,
        }
    }

    pub fn fs_config(&self) -> FsConfig {
        FsConfig {
            bandwidth: self.bandwidth,
            grid_size: self.grid_size,
            min_samples: if self.allow_insufficient {
                2
            } else {
                self.min_samples
            },
            path: EvalPath::Auto,
        }
    }

    fn provenance(&self, command: &str) -> Vec<(String, String)> {
        vec![
            ("tool".into(), format!("{TOOL_NAME} {TOOL_VERSION}")),
            ("command".into(), command.into()),
            ("config_hash".into(), self.hash()),
            ("bandwidth_method".into(), self.bandwidth.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("window_policy".into(), self.window.to_string()),
        ]
    }

    fn load(&self, channel: &ChannelInput) -> Result<TimeSeries> {
        let (series, diag) = read_csv(&channel.path, &self.ingest_config(channel))?;
        log::info!("{}: {}", channel.id, diag);
        Ok(series)
    }

    fn map<T, U, F>(&self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        if self.parallel {
            items.par_iter().map(f).collect()
        } else {
            items.iter().map(f).collect()
        }
    }
}

/// A channel that could not be processed.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelFailure {
    pub channel: String,
    pub message: String,
}

impl fmt::Display for ChannelFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "channel {}: {}", self.channel, self.message)
    }
}

/// Files written by a command and the channels that failed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommandReport {
    pub outputs: Vec<PathBuf>,
    pub failures: Vec<ChannelFailure>,
}

impl CommandReport {
    pub fn success(&self) -> bool {
        self.failures.is_empty()
    }
}

fn failure(channel: &str, err: impl fmt::Display) -> ChannelFailure {
    ChannelFailure {
        channel: channel.to_string(),
        message: err.to_string(),
    }
}

/// One row per channel: `channel,min,q1,median,mean,q3,max,count`.
pub fn cmd_summary(config: &RunConfig) -> Result<CommandReport> {
    let results = config.map(&config.channels, |ch| {
        config.load(ch).and_then(|s| summarize(s.values()))
    });
    let path = config.output_dir.join(SUMMARY_FILE);
    let mut provenance = config.provenance("summary");
    provenance.push(("quantile".into(), "linear interpolation at (n-1)q".into()));
    let mut out = CsvOutput::create(&path, &provenance)?;
    out.record(["channel", "min", "q1", "median", "mean", "q3", "max", "count"])?;
    let mut report = CommandReport::default();
    for (ch, result) in config.channels.iter().zip(results) {
        match result {
            Ok(s) => out.record([
                ch.id.clone(),
                sig6(s.min),
                sig6(s.q1),
                sig6(s.median),
                sig6(s.mean),
                sig6(s.q3),
                sig6(s.max),
                s.count.to_string(),
            ])?,
            Err(e) => report.failures.push(failure(&ch.id, e)),
        }
    }
    out.finish()?;
    report.outputs.push(path);
    Ok(report)
}

/// Row status in the metrics file.
pub const STATUS_OK: &str = "ok";
pub const STATUS_INSUFFICIENT: &str = "insufficient";

pub const METRICS_HEADER: [&str; 11] = [
    "channel",
    "scope",
    "window_start",
    "window_end",
    "sample_count",
    "bandwidth",
    "H",
    "N",
    "I",
    "C",
    "status",
];

struct MetricsRow {
    channel: String,
    scope: &'static str,
    start: i64,
    end: i64,
    count: usize,
    metrics: Option<FsMetrics>,
    status: String,
}

impl MetricsRow {
    fn fields(&self) -> [String; 11] {
        let m = self.metrics.as_ref();
        [
            self.channel.clone(),
            self.scope.to_string(),
            self.start.to_string(),
            self.end.to_string(),
            self.count.to_string(),
            sig6_opt(m.map(|m| m.bandwidth.value())),
            sig6_opt(m.map(|m| m.entropy)),
            sig6_opt(m.map(|m| m.entropy_power)),
            sig6_opt(m.map(|m| m.fisher_information)),
            sig6_opt(m.map(|m| m.complexity)),
            self.status.clone(),
        ]
    }
}

/// Per-window FS metrics for every channel plus one whole-series row per
/// channel. Window failures become rows with a status; the run continues.
pub fn cmd_analyze(config: &RunConfig) -> Result<CommandReport> {
    let fs = config.fs_config();
    let loaded = config.map(&config.channels, |ch| config.load(ch));

    let mut report = CommandReport::default();
    let mut tasks: Vec<(usize, &TimeSeries, Option<crate::ingest::Window>)> = Vec::new();
    for (k, (ch, series)) in config.channels.iter().zip(&loaded).enumerate() {
        let series = match series {
            Ok(s) => s,
            Err(e) => {
                log::error!("{}: {e}", ch.id);
                report.failures.push(failure(&ch.id, e));
                continue;
            }
        };
        let windows = config.window.partition(series, config.min_samples);
        log_gaps(&ch.id, &windows);
        tasks.extend(windows.into_iter().map(|w| (k, series, Some(w))));
        tasks.push((k, series, None));
    }

    let rows = config.map(&tasks, |(k, series, window)| {
        let channel = config.channels[*k].id.clone();
        let (scope, start, end, values) = match window {
            Some(w) => ("window", w.start, w.end, series.window_values(w)),
            None => {
                let ts = series.timestamps();
                ("series", ts[0], ts[ts.len() - 1] + 1, series.values())
            }
        };
        let flagged = window.as_ref().is_some_and(|w| w.insufficient) && !config.allow_insufficient;
        let (metrics, status) = if flagged {
            (None, STATUS_INSUFFICIENT.to_string())
        } else {
            match analyze_window(values, &fs) {
                Ok(m) => (Some(m), STATUS_OK.to_string()),
                Err(e) => (None, format!("failed: {e}")),
            }
        };
        MetricsRow {
            channel,
            scope,
            start,
            end,
            count: values.len(),
            metrics,
            status,
        }
    });

    let path = config.output_dir.join(METRICS_FILE);
    let mut provenance = config.provenance("analyze");
    provenance.push(("grid_size".into(), config.grid_size.to_string()));
    provenance.push(("min_samples".into(), config.min_samples.to_string()));
    let mut out = CsvOutput::create(&path, &provenance)?;
    out.record(METRICS_HEADER)?;
    for row in &rows {
        if row.status != STATUS_OK {
            log::warn!("{} [{}, {}): {}", row.channel, row.start, row.end, row.status);
        }
        out.record(row.fields())?;
    }
    out.finish()?;
    report.outputs.push(path);
    Ok(report)
}

fn log_gaps(channel: &str, windows: &[crate::ingest::Window]) {
    for pair in windows.windows(2) {
        let length = pair[0].end - pair[0].start;
        let missing = (pair[1].start - pair[0].end) / length;
        if missing > 0 {
            log::info!(
                "{channel}: no samples in {missing} window(s) from {} to {}",
                pair[0].end,
                pair[1].start
            );
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Moment {
    Mean,
    Variance,
}

impl std::str::FromStr for Moment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Moment::Mean),
            "variance" | "var" => Ok(Moment::Variance),
            other => Err(Error::InvalidArgument(format!("unknown moment `{other}`"))),
        }
    }
}

impl fmt::Display for Moment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Moment::Mean => "mean",
            Moment::Variance => "variance",
        })
    }
}

/// Per-window complexities read back from a metrics file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsTable {
    pub provenance: BTreeMap<String, String>,
    /// Channel order of first appearance.
    pub channels: Vec<String>,
    /// `(channel, window_start) -> C`, NaN where the row carries no metrics.
    pub complexity: BTreeMap<(String, i64), f64>,
}

pub fn read_metrics(path: &Path) -> Result<MetricsTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut table = MetricsTable::default();
    let mut body = String::new();
    for line in text.lines() {
        match line.strip_prefix('#') {
            Some(meta) => {
                if let Some((k, v)) = meta.trim().split_once('=') {
                    table.provenance.insert(k.to_string(), v.to_string());
                }
            }
            None => {
                body.push_str(line);
                body.push('\n');
            }
        }
    }
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let (c_channel, c_scope, c_start, c_c, c_status) = (
        col("channel")?,
        col("scope")?,
        col("window_start")?,
        col("C")?,
        col("status")?,
    );
    for record in rdr.records() {
        let record = record.map_err(csv_err)?;
        if &record[c_scope] != "window" {
            continue;
        }
        let channel = record[c_channel].to_string();
        let start: i64 = record[c_start]
            .parse()
            .map_err(|_| Error::Config(format!("bad window_start `{}`", &record[c_start])))?;
        let c = if &record[c_status] == STATUS_OK {
            record[c_c].parse().unwrap_or(f64::NAN)
        } else {
            f64::NAN
        };
        if !table.channels.contains(&channel) {
            table.channels.push(channel.clone());
        }
        table.complexity.insert((channel, start), c);
    }
    Ok(table)
}

/// Correlate each channel's per-window complexity against a covariate's
/// per-window mean or variance; one `channel,r,p_value,R,seed,n_pairs`
/// row per channel.
pub fn cmd_correlate(
    config: &RunConfig,
    metric_file: &Path,
    covariate: &ChannelInput,
    moment: Moment,
) -> Result<CommandReport> {
    let table = read_metrics(metric_file)?;
    if let Some(policy) = table.provenance.get("window_policy") {
        if *policy != config.window.to_string() {
            return Err(Error::Config(format!(
                "metrics computed with window policy {policy}, config uses {}",
                config.window
            )));
        }
    }
    let series = config.load(covariate)?;
    let windows = config.window.partition(&series, config.min_samples);
    let by_start: BTreeMap<i64, f64> = windows
        .iter()
        .zip(daily_moments(&series, &windows))
        .map(|(w, m)| {
            let value = if w.insufficient && !config.allow_insufficient {
                None
            } else {
                match moment {
                    Moment::Mean => Some(m.mean),
                    Moment::Variance => m.variance,
                }
            };
            (m.start, value.unwrap_or(f64::NAN))
        })
        .collect();

    let mode = PermutationMode::MonteCarlo {
        replicates: config.permutations,
    };
    let path = config.output_dir.join(CORRELATION_FILE);
    let mut provenance = config.provenance("correlate");
    provenance.push(("covariate".into(), format!("{}:{moment}", covariate.id)));
    provenance.push((
        "metrics_config_hash".into(),
        table.provenance.get("config_hash").cloned().unwrap_or_default(),
    ));
    provenance.push(("test".into(), "two-sided permutation, add-one p-value".into()));
    let mut out = CsvOutput::create(&path, &provenance)?;
    out.record(["channel", "r", "p_value", "R", "seed", "n_pairs", "status"])?;
    let mut report = CommandReport::default();
    for channel in &table.channels {
        let (x, y): (Vec<f64>, Vec<f64>) = table
            .complexity
            .range((channel.clone(), i64::MIN)..=(channel.clone(), i64::MAX))
            .map(|((_, start), c)| (*c, by_start.get(start).copied().unwrap_or(f64::NAN)))
            .unzip();
        let n_pairs = x
            .iter()
            .zip(&y)
            .filter(|(a, b)| !a.is_nan() && !b.is_nan())
            .count();
        let fields = match permutation_test_with(&x, &y, mode, config.seed, config.parallel) {
            Ok(rep) => [
                channel.clone(),
                sig6(rep.r),
                sig6(rep.p_value),
                rep.permutations.to_string(),
                rep.seed.to_string(),
                n_pairs.to_string(),
                STATUS_OK.to_string(),
            ],
            Err(e) => {
                log::warn!("{channel}: {e}");
                [
                    channel.clone(),
                    String::new(),
                    String::new(),
                    config.permutations.to_string(),
                    config.seed.to_string(),
                    n_pairs.to_string(),
                    format!("failed: {e}"),
                ]
            }
        };
        out.record(fields)?;
    }
    out.finish()?;
    report.outputs.push(path);
    Ok(report)
}

/// Histogram and KDE of one channel's whole series:
/// `bin_center,hist_density,kde_density`.
pub fn cmd_density(config: &RunConfig, channel: &str, bins: usize) -> Result<CommandReport> {
    let input = config
        .channels
        .iter()
        .find(|c| c.id == channel)
        .ok_or_else(|| Error::Config(format!("no channel `{channel}` configured")))?;
    let series = config.load(input)?;
    let bandwidth = select_bandwidth(series.values(), config.bandwidth)?;
    let estimate = fit(series.values(), bandwidth, config.grid_size)?;
    let rows = density_export(&estimate, bins)?;

    let path = config.output_dir.join(format!("density_{channel}.csv"));
    let mut provenance = config.provenance("density");
    provenance.push(("channel".into(), channel.to_string()));
    provenance.push(("bandwidth".into(), sig6(bandwidth.value())));
    let mut out = CsvOutput::create(&path, &provenance)?;
    out.record(["bin_center", "hist_density", "kde_density"])?;
    for r in rows {
        out.record([sig6(r.bin_center), sig6(r.hist_density), sig6(r.kde_density)])?;
    }
    out.finish()?;
    Ok(CommandReport {
        outputs: vec![path],
        failures: Vec::new(),
    })
}

/// `id=path` entries for every channel in a directory of `<id>.csv` files,
/// sorted by id.
pub fn channels_in_dir(dir: &Path, exclude: &[&str]) -> Result<Vec<ChannelInput>> {
    let mut channels: Vec<ChannelInput> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .filter_map(|p| {
            let id = p.file_stem()?.to_str()?.to_string();
            (!exclude.contains(&id.as_str())).then_some(ChannelInput { id, path: p })
        })
        .collect();
    channels.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(channels)
}
