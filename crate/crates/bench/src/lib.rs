//! Benchmark harness for `shallowsort`: input families, a grid runner that
//! verifies every trial, CSV reports and merge-trace comparison.

use std::path::PathBuf;

use thiserror::Error;

pub mod experiment;
pub mod generate;
pub mod io;
pub mod trace;

pub use experiment::{read_csv, report_csv, run_experiment, run_trial, Grid, TrialRecord};
pub use generate::{generate, random_profile, Family, InputSpec};
pub use trace::{compare_traces, TraceComparison};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("verification failed for {spec}, policy {policy}, engine {engine}, kernel {kernel}, seed {seed}")]
    Verification {
        spec: String,
        policy: String,
        engine: String,
        kernel: String,
        seed: u64,
    },
    #[error("no records to report")]
    Empty,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}
