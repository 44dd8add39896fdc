//! Fisher-Shannon analysis of sampled time series.
//!
//! The Fisher information measure `I`, the Shannon entropy power `N` and
//! their product, the Fisher-Shannon complexity `C = N * I`, are estimated
//! from a Gaussian kernel density estimate of the samples. `C >= 1` with
//! equality only for Gaussian data, and `C` is invariant under scaling,
//! which makes it comparable across channels measured in different units.
//!
//! Modules, bottom-up:
//!
//! - [`ingest`]: CSV series, validation, calendar windows
//! - [`kde`]: bandwidth selection and grid evaluation of the density and its derivative
//! - [`fisher_shannon`]: `H`, `N`, `I`, `C` from a fitted density
//! - [`stats`]: summary statistics, window moments, Pearson correlation, permutation tests
//! - [`synthetic`]: seeded test channels
//! - [`cli`]: the commands behind the `fsanalysis` binary
//!
//! ```
//! use fsanalysis::fisher_shannon::{analyze_window, FsConfig};
//! use fsanalysis::synthetic::{sample_values, Shape};
//!
//! let xs = sample_values(Shape::Gaussian, 20_000, 1);
//! let m = analyze_window(&xs, &FsConfig::default()).unwrap();
//! assert!((m.complexity - 1.0).abs() < 0.05);
//! ```

pub mod cli;
pub mod error;
pub mod fisher_shannon;
pub mod ingest;
pub mod kde;
pub mod output;
pub mod quadrature;
pub mod stats;
pub mod synthetic;

pub use error::{Error, Result};
