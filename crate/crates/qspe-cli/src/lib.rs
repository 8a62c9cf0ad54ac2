//! Batch driver behind the `qspe` binary: config parsing, the experiment
//! catalogue, and the CSV/JSON writers.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use thiserror::Error;

pub use config::{parse, ConfigError, Experiment, RunConfig};
pub use experiments::{points, run_rows, Row, RunError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("no output directory: pass --output or set `output` in the config")]
    NoOutput,
    #[error("cannot start thread pool: {0}")]
    Threads(String),
    #[error("{0}")]
    Numerical(#[from] RunError),
}

impl CliError {
    /// 1 for bad input or environment, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }
}

pub fn load(path: &Path) -> Result<RunConfig, CliError> {
    let src = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    Ok(parse(&src)?)
}

/// What a finished run wrote.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub points: usize,
    pub rows: usize,
}

/// Runs `cfg` and writes `results.csv`, `summary.csv` and `metadata.json`
/// into `output_dir`. `threads = None` uses rayon's default.
pub fn run(cfg: &RunConfig, config_path: &Path, output_dir: &Path, threads: Option<usize>) -> Result<RunSummary, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Threads(e.to_string()))?;
    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let rows = pool.install(|| run_rows(cfg))?;
    let elapsed_seconds = clock.elapsed().as_secs_f64();

    let write_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Write { path, source }
    };
    std::fs::create_dir_all(output_dir).map_err(write_err(output_dir))?;
    let id = cfg.experiment.id();
    let n_points = points(cfg).len();
    let files = [
        ("results.csv", output::results_csv(id, &rows)),
        ("summary.csv", output::summary_csv(id, &rows)),
        (
            "metadata.json",
            serde_json::to_string_pretty(
                &output::Metadata {
                    config: cfg,
                    config_path,
                    threads: pool.current_num_threads(),
                    points: n_points,
                    rows: rows.len(),
                    started_unix,
                    elapsed_seconds,
                }
                .to_json(),
            )
            .expect("metadata serializes")
                + "\n",
        ),
    ];
    for (name, contents) in files {
        let path = output_dir.join(name);
        output::write_atomic(&path, &contents).map_err(write_err(&path))?;
    }
    Ok(RunSummary { output_dir: output_dir.to_path_buf(), points: n_points, rows: rows.len() })
}
