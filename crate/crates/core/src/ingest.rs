//! CSV ingestion of timestamped scalar series and calendar windowing.
//!
//! Gaps are left as gaps: a missing sample is simply absent and every
//! downstream estimator works on whatever a window holds.

use std::fmt;
use std::io::Read;
use std::ops::Range;
use std::path::Path;

use chrono::{DateTime, NaiveDateTime};

use crate::error::{Error, Result};

pub const SECONDS_PER_DAY: i64 = 86_400;

/// Default minimum number of samples for a window to enter the metrics.
pub const DEFAULT_MIN_WINDOW_SAMPLES: usize = 1000;

/// Timestamped samples of one channel.
///
/// Timestamps are whole seconds since the Unix epoch (UTC), strictly
/// increasing. Values are finite. Units are carried as an opaque label.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    channel_id: String,
    units: String,
    timestamps: Vec<i64>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(
        channel_id: impl Into<String>,
        units: impl Into<String>,
        timestamps: Vec<i64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if timestamps.len() != values.len() {
            return Err(Error::LengthMismatch(timestamps.len(), values.len()));
        }
        if timestamps.is_empty() {
            return Err(Error::EmptySeries);
        }
        for (row, pair) in timestamps.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(Error::NonIncreasingTimestamps {
                    row: row + 1,
                    previous: pair[0],
                    current: pair[1],
                });
            }
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite value {v}")));
        }
        Ok(Self {
            channel_id: channel_id.into(),
            units: units.into(),
            timestamps,
            values,
        })
    }

    pub fn channel_id(&self) -> &str {
        &self.channel_id
    }

    pub fn units(&self) -> &str {
        &self.units
    }

    pub fn timestamps(&self) -> &[i64] {
        &self.timestamps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values of the samples a window covers.
    pub fn window_values(&self, window: &Window) -> &[f64] {
        &self.values[window.indices.clone()]
    }
}

/// A half-open time interval `[start, end)` and the index range of the
/// parent series samples that fall inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub start: i64,
    pub end: i64,
    pub indices: Range<usize>,
    /// Fewer samples than the configured minimum; excluded from metrics
    /// unless the caller overrides.
    pub insufficient: bool,
}

impl Window {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// How a series is cut into windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowPolicy {
    /// Calendar days `[00:00, 24:00)` on a clock shifted by a fixed offset
    /// from UTC (no DST rules).
    Daily { utc_offset: i64 },
    /// Consecutive windows of `seconds` length aligned on `origin`.
    Fixed { seconds: i64, origin: i64 },
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy::Daily { utc_offset: 0 }
    }
}

impl fmt::Display for WindowPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowPolicy::Daily { utc_offset } => write!(f, "daily:utc_offset={utc_offset}"),
            WindowPolicy::Fixed { seconds, origin } => {
                write!(f, "fixed:seconds={seconds},origin={origin}")
            }
        }
    }
}

impl WindowPolicy {
    pub fn partition(&self, series: &TimeSeries, min_samples: usize) -> Vec<Window> {
        match *self {
            WindowPolicy::Daily { utc_offset } => partition_daily(series, utc_offset, min_samples),
            WindowPolicy::Fixed { seconds, origin } => partition_fixed(series, seconds, origin, min_samples),
        }
    }
}

/// Partition a series into calendar days of the clock `UTC + utc_offset`.
///
/// Days holding no sample produce no window. Windows with fewer than
/// `min_samples` samples are returned but flagged `insufficient`.
pub fn partition_daily(series: &TimeSeries, utc_offset: i64, min_samples: usize) -> Vec<Window> {
    partition_fixed(series, SECONDS_PER_DAY, -utc_offset, min_samples)
}

/// Partition into windows `[origin + k*seconds, origin + (k+1)*seconds)`.
pub fn partition_fixed(series: &TimeSeries, seconds: i64, origin: i64, min_samples: usize) -> Vec<Window> {
    assert!(seconds > 0, "window length must be positive");
    let ts = series.timestamps();
    let mut windows = Vec::new();
    let mut first = 0;
    while first < ts.len() {
        let key = (ts[first] - origin).div_euclid(seconds);
        let start = origin + key * seconds;
        let end = start + seconds;
        let last = first + ts[first..].partition_point(|&t| t < end);
        windows.push(Window {
            start,
            end,
            indices: first..last,
            insufficient: last - first < min_samples,
        });
        first = last;
    }
    windows
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimestampFormat {
    /// Integer seconds since the Unix epoch.
    #[default]
    EpochSeconds,
    /// RFC 3339 with offset, or a naive `YYYY-MM-DD[T ]HH:MM:SS` read as UTC.
    Iso8601,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestConfig {
    pub channel_id: String,
    pub units: String,
    pub time_column: String,
    pub value_column: String,
    pub timestamp_format: TimestampFormat,
    pub delimiter: u8,
    /// Largest tolerated fraction of rows that fail to parse.
    pub unparseable_tolerance: f64,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            channel_id: "series".into(),
            units: String::new(),
            time_column: "timestamp".into(),
            value_column: "value".into(),
            timestamp_format: TimestampFormat::EpochSeconds,
            delimiter: b',',
            unparseable_tolerance: 0.01,
        }
    }
}

/// Row accounting for one ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IngestDiagnostics {
    pub rows: usize,
    pub kept: usize,
    pub dropped_missing: usize,
    pub dropped_non_finite: usize,
    pub unparseable: usize,
}

impl IngestDiagnostics {
    pub fn dropped(&self) -> usize {
        self.dropped_missing + self.dropped_non_finite + self.unparseable
    }
}

impl fmt::Display for IngestDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rows={} kept={} dropped_missing={} dropped_non_finite={} unparseable={}",
            self.rows, self.kept, self.dropped_missing, self.dropped_non_finite, self.unparseable
        )
    }
}

pub fn read_csv(path: impl AsRef<Path>, config: &IngestConfig) -> Result<(TimeSeries, IngestDiagnostics)> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv_from(std::io::BufReader::new(file), config).map_err(|e| match e {
        Error::Csv { source, .. } => Error::Csv {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

/// Same as [`read_csv`] over any reader.
pub fn read_csv_from<R: Read>(reader: R, config: &IngestConfig) -> Result<(TimeSeries, IngestDiagnostics)> {
    let csv_err = |source| Error::Csv {
        path: "<reader>".into(),
        source,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(config.delimiter)
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let headers = rdr.byte_headers().map_err(csv_err)?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name.as_bytes())
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let time_idx = find(&config.time_column)?;
    let value_idx = find(&config.value_column)?;

    let mut diag = IngestDiagnostics::default();
    let mut timestamps = Vec::new();
    let mut values = Vec::new();
    let mut record = csv::ByteRecord::new();
    while rdr.read_byte_record(&mut record).map_err(csv_err)? {
        diag.rows += 1;
        let t = record
            .get(time_idx)
            .and_then(|raw| std::str::from_utf8(raw).ok())
            .and_then(|raw| parse_timestamp(raw.trim(), config.timestamp_format));
        let Some(t) = t else {
            diag.unparseable += 1;
            continue;
        };
        let raw = match record.get(value_idx).map(std::str::from_utf8) {
            Some(Ok(s)) => s.trim(),
            Some(Err(_)) => {
                diag.unparseable += 1;
                continue;
            }
            None => "",
        };
        if raw.is_empty() || raw.eq_ignore_ascii_case("na") {
            diag.dropped_missing += 1;
            continue;
        }
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                timestamps.push(t);
                values.push(v);
            }
            Ok(_) => diag.dropped_non_finite += 1,
            Err(_) => diag.unparseable += 1,
        }
    }
    diag.kept = values.len();

    if diag.rows > 0 && diag.unparseable as f64 > config.unparseable_tolerance * diag.rows as f64 {
        return Err(Error::TooManyUnparseable {
            unparseable: diag.unparseable,
            rows: diag.rows,
            tolerance: config.unparseable_tolerance,
        });
    }
    let series = TimeSeries::new(
        config.channel_id.clone(),
        config.units.clone(),
        timestamps,
        values,
    )?;
    Ok((series, diag))
}

fn parse_timestamp(raw: &str, format: TimestampFormat) -> Option<i64> {
    match format {
        TimestampFormat::EpochSeconds => raw.parse::<i64>().ok().or_else(|| {
            let v = raw.parse::<f64>().ok()?;
            (v.is_finite() && v.fract() == 0.0 && v.abs() < 9.0e15).then_some(v as i64)
        }),
        TimestampFormat::Iso8601 => parse_iso8601(raw),
    }
}

pub fn parse_iso8601(raw: &str) -> Option<i64> {
    if let Ok(dt) = DateTime::parse_from_rfc3339(raw) {
        return Some(dt.timestamp());
    }
    ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"]
        .iter()
        .find_map(|fmt| NaiveDateTime::parse_from_str(raw, fmt).ok())
        .map(|dt| dt.and_utc().timestamp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str) -> Result<(TimeSeries, IngestDiagnostics)> {
        let config = IngestConfig {
            time_column: "t".into(),
            value_column: "v".into(),
            ..IngestConfig::default()
        };
        read_csv_from(text.as_bytes(), &config)
    }

    fn hourly_series(start: i64, step: i64, n: usize) -> TimeSeries {
        let ts: Vec<i64> = (0..n as i64).map(|k| start + k * step).collect();
        TimeSeries::new("x", "", ts, vec![0.0; n]).unwrap()
    }

    #[test]
    fn three_rows() {
        let (s, d) = read("t,v\n0,1.0\n1,2.0\n2,3.0").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(d.dropped(), 0);
    }

    #[test]
    fn nan_row_is_dropped_and_counted() {
        let (s, d) = read("t,v\n0,1.0\n1,NaN\n2,3.0").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(d.dropped_non_finite, 1);
        assert_eq!(d.dropped(), 1);
    }

    #[test]
    fn missing_value_is_dropped() {
        let (s, d) = read("t,v\n0,1.0\n1,\n2,3.0\n3").unwrap();
        assert_eq!(s.timestamps(), &[0, 2]);
        assert_eq!(d.dropped_missing, 2);
    }

    #[test]
    fn duplicated_timestamp_is_rejected() {
        let err = read("t,v\n0,1.0\n1,2.0\n1,3.0").unwrap_err();
        assert!(matches!(err, Error::NonIncreasingTimestamps { .. }), "{err}");
    }

    #[test]
    fn unparseable_beyond_tolerance() {
        let err = read("t,v\n0,1.0\n1,abc\n2,3.0").unwrap_err();
        assert!(matches!(err, Error::TooManyUnparseable { unparseable: 1, .. }));

        let mut text = String::from("t,v\n");
        for k in 0..200 {
            text.push_str(&format!("{k},{}\n", if k == 50 { "x" } else { "1.5" }));
        }
        let (s, d) = read(&text).unwrap();
        assert_eq!(s.len(), 199);
        assert_eq!(d.unparseable, 1);
    }

    #[test]
    fn empty_result_is_an_error() {
        assert!(matches!(read("t,v\n0,NaN\n").unwrap_err(), Error::EmptySeries));
        assert!(matches!(read("t,v\n").unwrap_err(), Error::EmptySeries));
    }

    #[test]
    fn missing_column() {
        assert!(matches!(read("a,b\n0,1\n").unwrap_err(), Error::MissingColumn(c) if c == "t"));
    }

    #[test]
    fn iso_timestamps_and_delimiter() {
        let config = IngestConfig {
            time_column: "time".into(),
            value_column: "speed".into(),
            timestamp_format: TimestampFormat::Iso8601,
            delimiter: b';',
            ..IngestConfig::default()
        };
        let text =
            "time;speed\n2016-12-28T00:00:00Z;1.5\n2016-12-28 00:00:01;2.5\n2016-12-28T01:00:02+01:00;3\n";
        let (s, _) = read_csv_from(text.as_bytes(), &config).unwrap();
        assert_eq!(s.timestamps(), &[1_482_883_200, 1_482_883_201, 1_482_883_202]);
    }

    #[test]
    fn two_full_days_at_midnight() {
        let s = hourly_series(1_482_883_200, 1, 2 * 86_400);
        let w = partition_daily(&s, 0, DEFAULT_MIN_WINDOW_SAMPLES);
        assert_eq!(w.len(), 2);
        assert!(w.iter().all(|w| w.len() == 86_400 && !w.insufficient));
        assert_eq!(w[0].start, 1_482_883_200);
        assert_eq!(w[1].end, 1_482_883_200 + 2 * 86_400);
    }

    #[test]
    fn start_at_2359_gives_short_first_day() {
        let midnight = 1_482_883_200;
        let s = hourly_series(midnight - 60, 1, 60 + 86_400);
        let w = partition_daily(&s, 0, DEFAULT_MIN_WINDOW_SAMPLES);
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].len(), 60);
        assert!(w[0].insufficient);
        assert!(!w[1].insufficient);
    }

    #[test]
    fn gap_day_emits_no_window() {
        let day = 86_400;
        let mut ts: Vec<i64> = (0..100).map(|k| k * 600).collect();
        ts.extend((0..100).map(|k| 2 * day + k * 600));
        let s = TimeSeries::new("x", "", ts, vec![1.0; 200]).unwrap();
        let w = partition_daily(&s, 0, 10);
        assert_eq!(w.len(), 2);
        assert_eq!(w[1].start, 2 * day);
    }

    #[test]
    fn utc_offset_shifts_boundaries() {
        // 1 sample per hour over two UTC days; a +2 h clock moves the cut.
        let s = hourly_series(0, 3600, 48);
        let w = partition_daily(&s, 7200, 1);
        assert_eq!(w.len(), 3);
        assert_eq!(w[0].start, -7200);
        assert_eq!(w[0].len(), 22);
        assert_eq!(w[1].len(), 24);
        assert_eq!(w[2].len(), 2);
    }

    #[test]
    fn policy_display() {
        assert_eq!(
            WindowPolicy::Daily { utc_offset: 3600 }.to_string(),
            "daily:utc_offset=3600"
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn partition_covers_every_sample(
                gaps in proptest::collection::vec(1i64..20_000, 1..400),
                start in -200_000i64..200_000,
                offset in -50_000i64..50_000,
            ) {
                let mut ts = vec![start];
                for g in gaps { ts.push(ts.last().unwrap() + g); }
                let n = ts.len();
                let s = TimeSeries::new("p", "", ts, (0..n).map(|k| k as f64).collect()).unwrap();
                let windows = partition_daily(&s, offset, 5);
                let mut next = 0;
                for w in &windows {
                    prop_assert_eq!(w.indices.start, next);
                    prop_assert!(w.start < w.end);
                    prop_assert!(!w.is_empty());
                    for &t in &s.timestamps()[w.indices.clone()] {
                        prop_assert!(w.start <= t && t < w.end);
                        prop_assert_eq!((t + offset).div_euclid(86_400) * 86_400 - offset, w.start);
                    }
                    prop_assert_eq!(w.insufficient, w.len() < 5);
                    next = w.indices.end;
                }
                prop_assert_eq!(next, n);
            }
        }
    }
}
