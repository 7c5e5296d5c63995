//! Command-line driver: configuration schema, experiment dispatch and run
//! directories.

pub mod config;
pub mod output;
pub mod run;

use std::path::{Path, PathBuf};

pub use config::{parse_config, ConfigError, Experiment, RunConfig};
pub use output::{export_summary, write_run, RunOutput};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// I/O failure writing results.
    pub const IO: i32 = 1;
    /// Bad configuration or invalid input.
    pub const VALIDATION: i32 = 2;
    /// Numerical failure during the run.
    pub const NUMERICAL: i32 = 3;
}

/// Maps an error to its exit code.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return exit::VALIDATION;
    }
    if let Some(e) = err.downcast_ref::<ionspin_core::Error>() {
        return if e.is_validation() { exit::VALIDATION } else { exit::NUMERICAL };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return exit::IO;
    }
    exit::NUMERICAL
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    /// `Some(None)` forces exact probabilities.
    pub shots: Option<Option<u64>>,
}

/// Reads, checks and resolves a configuration for `experiment`.
pub fn load_config(path: &Path, experiment: Experiment, ov: &Overrides) -> anyhow::Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new("", format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = parse_config(&text)?;
    if cfg.experiment != experiment {
        return Err(ConfigError::new(
            "experiment",
            format!("config is for `{}` but the `{}` subcommand was used", cfg.experiment.name(), experiment.name()),
        )
        .into());
    }
    if let Some(s) = ov.seed {
        cfg.seed = s;
    }
    if let Some(s) = ov.shots {
        if s == Some(0) {
            return Err(ConfigError::new("shots", "must be at least 1").into());
        }
        cfg.shots = s;
    }
    if let Some(o) = &ov.out {
        cfg.output = Some(o.clone());
    }
    Ok(cfg)
}

/// Directory a run writes into.
pub fn run_dir(cfg: &RunConfig) -> PathBuf {
    cfg.output.clone().unwrap_or_else(|| Path::new("runs").join(cfg.experiment.name()))
}

/// Runs `cfg` and writes its results; returns the run directory.
pub fn run_and_write(cfg: &RunConfig) -> anyhow::Result<PathBuf> {
    let out = run::execute(cfg)?;
    let dir = run_dir(cfg);
    write_run(&dir, cfg, &out)?;
    Ok(dir)
}
