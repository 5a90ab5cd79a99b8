//! Experiment front end for the uavris link simulator.
//!
//! The library half of the `uavris` binary: config parsing, figure presets,
//! row/CSV handling, series execution, and the cross-validation report. The
//! binary adds argument handling and exit-code mapping on top.

pub mod config;
pub mod presets;
pub mod report;
pub mod rows;
pub mod runner;

pub use config::{parse_config, ConfigError, ExperimentConfig, SweepVar};
pub use report::{validate, ValidationReport};
pub use rows::{read_csv, sort_rows, write_csv, CsvError, Engine, ResultRow};
pub use runner::{point_rows, run_all, run_series, sweep_rows, RunError, Series};
