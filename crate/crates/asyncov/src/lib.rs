//! Tick-file ingestion, report formats, the parallel Monte Carlo runner and
//! the `asyncov` command line, built on `asyncov-core`.

#![forbid(unsafe_code)]

pub mod cli;
pub mod config;
pub mod error;
pub mod ingest;
pub mod parallel;
pub mod report;

pub use error::{AppError, AppResult};
pub use ingest::{ingest_ticks, read_ticks, save_ticks, write_ticks, HeaderMode, IngestOptions};
pub use parallel::run_experiment_parallel;
pub use report::Format;
