//! Subcommand bodies for the `varres` binary, kept in the library so they
//! can be driven from tests without spawning a process.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::experiment::{ConfigError, ExperimentFile, OutputFormat};
use crate::montecarlo::{run_sweep_with, summarize_eigen_stats, Execution};
use crate::report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

/// Command-line overrides applied on top of the experiment file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub output: Option<PathBuf>,
}

pub fn load_experiment(
    config: Option<&Path>,
    overrides: &Overrides,
) -> Result<ExperimentFile, CliError> {
    let mut file = match config {
        Some(p) => ExperimentFile::load(p)?,
        None => ExperimentFile::default(),
    };
    if let Some(seed) = overrides.seed {
        file.sweep.master_seed = seed;
    }
    if let Some(trials) = overrides.trials {
        file.sweep.trials = trials;
    }
    if let Some(out) = &overrides.output {
        file.output = Some(out.clone());
    }
    Ok(file)
}

/// Runs the sweep and renders it. Writes to the configured output path when
/// there is one and returns the rendered text either way.
pub fn cmd_sweep(file: &ExperimentFile, execution: Execution) -> Result<String, CliError> {
    // Configuration problems (bad level pairs, empty grids) are config errors.
    file.sweep
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let summary =
        run_sweep_with(&file.sweep, execution).map_err(|e| CliError::Runtime(e.to_string()))?;
    let text = match file.format {
        OutputFormat::Csv => report::to_csv_string(&summary),
        OutputFormat::Table => report::to_table(&summary),
    };
    if let Some(path) = &file.output {
        std::fs::write(path, &text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(text)
}

pub fn cmd_eta_table() -> String {
    report::eta_table()
}

pub fn cmd_channel_stats(file: &ExperimentFile, execution: Execution) -> Result<String, CliError> {
    file.sweep
        .channel
        .validate()
        .and_then(|_| file.sweep.tx_geometry())
        .and_then(|_| file.sweep.rx_geometry())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let stats = summarize_eigen_stats(&file.sweep, file.draws, execution).map_err(|e| match e {
        crate::Error::NoDraws => CliError::Config(e.to_string()),
        other => CliError::Runtime(other.to_string()),
    })?;
    Ok(report::eigen_report(&stats))
}
