//! Experiment harness for the `qapbench` binary: instance-set generation,
//! depth sweeps to an OSP threshold, classical baselines, Grover and shell
//! statistics, and report aggregation. Every artifact is a CSV or JSON file
//! under the configured output directory, and results do not depend on the
//! worker count.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;
pub mod fit;
pub mod layout;

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

pub use config::ExperimentConfig;
pub use error::{BenchError, Result};
pub use layout::Layout;

/// Environment variable consulted when no worker count is configured.
pub const WORKERS_ENV: &str = "QAPBENCH_WORKERS";

/// Worker count from the config, then `QAPBENCH_WORKERS`; `None` lets rayon
/// pick.
pub fn resolve_workers(cfg: &ExperimentConfig) -> Result<Option<usize>> {
    if let Some(w) = cfg.workers {
        return Ok(Some(w));
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(Some(w)),
            _ => Err(BenchError::Config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs `f` on a dedicated thread pool of `workers` threads.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| BenchError::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Serialize)]
struct Metadata<'a> {
    command: &'a str,
    version: &'a str,
    workers: Option<usize>,
    started_unix_s: f64,
    finished_unix_s: f64,
    config: &'a ExperimentConfig,
}

/// Writes the timestamp sidecar for a finished command. Timestamps live
/// only here so the CSVs stay byte-identical across runs.
pub fn write_metadata(
    cfg: &ExperimentConfig,
    command: &str,
    workers: Option<usize>,
    started: SystemTime,
) -> Result<()> {
    let secs = |t: SystemTime| t.duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
    let meta = Metadata {
        command,
        version: env!("CARGO_PKG_VERSION"),
        workers,
        started_unix_s: secs(started),
        finished_unix_s: secs(SystemTime::now()),
        config: cfg,
    };
    csvio::write_json(&Layout::new(&cfg.out_dir).metadata(command), &meta)
}

/// The harness chapter of the guide, compiled so its code blocks run as
/// doctests.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/harness.md")]
mod book_harness {}
