//! Flat `key = value` experiment files.
//!
//! Blank lines and `#` comments are ignored. List values are comma
//! separated; `snr_db` also accepts `start:stop:step`, and level pairs are
//! written `b_low:b_high`. Unknown or repeated keys are rejected. Every key
//! is optional; an empty file describes the GBA sweep for 64 receive
//! antennas with `b_ref = 5`.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::alloc::Algorithm;
use crate::channel::SignatureNorm;
use crate::montecarlo::{snr_grid, SweepConfig};

/// Channel draws used by `channel-stats` when the file does not say.
pub const DEFAULT_DRAWS: usize = 10_000;

pub const KEYS: &[&str] = &[
    "n_tx",
    "n_rx",
    "element_spacing",
    "signature_norm",
    "bandwidth",
    "walden_fom",
    "snr_db",
    "trials",
    "seed",
    "b_ref",
    "pairs",
    "algorithms",
    "num_clusters",
    "paths_per_cluster",
    "angle_spread",
    "pathloss",
    "fading_variance",
    "draws",
    "output",
    "format",
];

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Read { path: PathBuf, message: String },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: key '{key}' given more than once")]
    DuplicateKey { line: usize, key: String },

    #[error("line {line}: invalid value for '{key}': {message}")]
    Value {
        line: usize,
        key: String,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Table,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentFile {
    pub sweep: SweepConfig,
    pub draws: usize,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentFile {
    fn default() -> Self {
        Self {
            sweep: SweepConfig::default(),
            draws: DEFAULT_DRAWS,
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut file = ExperimentFile::default();
        let mut seen: Vec<&str> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("expected 'key = value', got '{content}'"),
                });
            };
            let key = key.trim();
            let value = value.trim();
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            };
            if seen.contains(&known) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
            seen.push(known);
            file.apply(known, value)
                .map_err(|message| ConfigError::Value {
                    line,
                    key: key.to_string(),
                    message,
                })?;
        }
        Ok(file)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), String> {
        let s = &mut self.sweep;
        match key {
            "n_tx" => s.n_tx = parse_num(value)?,
            "n_rx" => s.n_rx = parse_num(value)?,
            "element_spacing" => s.element_spacing = parse_num(value)?,
            "signature_norm" => {
                s.signature_norm = match value {
                    "unit-norm" => SignatureNorm::UnitNorm,
                    "unit-modulus" => SignatureNorm::UnitModulus,
                    other => {
                        return Err(format!("expected unit-norm or unit-modulus, got '{other}'"))
                    }
                }
            }
            "bandwidth" => s.bandwidth = parse_num(value)?,
            "walden_fom" => s.walden_fom = parse_num(value)?,
            "snr_db" => s.snr_grid_db = parse_snr_list(value)?,
            "trials" => s.trials = parse_num(value)?,
            "seed" => s.master_seed = parse_num(value)?,
            "b_ref" => s.b_ref = parse_bits(value)?,
            "pairs" => {
                s.level_pairs = split_list(value)?
                    .into_iter()
                    .map(|item| {
                        let (lo, hi) = item
                            .split_once(':')
                            .ok_or_else(|| format!("expected b_low:b_high, got '{item}'"))?;
                        Ok((parse_bits(lo)?, parse_bits(hi)?))
                    })
                    .collect::<Result<_, String>>()?
            }
            "algorithms" => {
                let mut algs = split_list(value)?
                    .into_iter()
                    .map(|a| a.parse::<Algorithm>().map_err(|e| e.to_string()))
                    .collect::<Result<Vec<_>, String>>()?;
                algs.dedup();
                s.algorithms = algs;
            }
            "num_clusters" => s.channel.num_clusters = parse_num(value)?,
            "paths_per_cluster" => s.channel.paths_per_cluster = parse_num(value)?,
            "angle_spread" => s.channel.intra_cluster_angle_spread = parse_num(value)?,
            "pathloss" => s.channel.pathloss = parse_num(value)?,
            "fading_variance" => s.channel.fading_variance = parse_num(value)?,
            "draws" => self.draws = parse_num(value)?,
            "output" => {
                if value.is_empty() {
                    return Err("empty path".into());
                }
                self.output = Some(PathBuf::from(value));
            }
            "format" => {
                self.format = match value {
                    "csv" => OutputFormat::Csv,
                    "table" => OutputFormat::Table,
                    other => return Err(format!("expected csv or table, got '{other}'")),
                }
            }
            _ => unreachable!("key list and match arms out of sync: {key}"),
        }
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse::<T>()
        .map_err(|e| format!("'{}': {e}", value.trim()))
}

fn parse_bits(value: &str) -> Result<u32, String> {
    let b: i64 = parse_num(value)?;
    if b < 0 {
        return Err(format!("bit count must be non-negative, got {b}"));
    }
    u32::try_from(b).map_err(|_| format!("bit count {b} out of range"))
}

fn split_list(value: &str) -> Result<Vec<&str>, String> {
    let items: Vec<&str> = value.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err("empty list entry".into());
    }
    Ok(items)
}

fn parse_snr_list(value: &str) -> Result<Vec<f64>, String> {
    let items = split_list(value)?;
    if items.len() == 1 && items[0].contains(':') {
        let parts: Vec<&str> = items[0].split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(format!("expected start:stop:step, got '{}'", items[0]));
        };
        let (start, stop, step): (f64, f64, f64) =
            (parse_num(start)?, parse_num(stop)?, parse_num(step)?);
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err("range needs step > 0 and stop >= start".into());
        }
        return Ok(snr_grid(start, stop, step));
    }
    items.into_iter().map(parse_num).collect()
}
