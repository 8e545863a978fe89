//! Scenario runner for the `dephase` command-line tool.

pub mod config;
pub mod emit;
pub mod runner;
pub mod selftest;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use config::{parse_config, parse_config_in, ConfigError, Quantity, ScenarioConfig};
pub use emit::{emit, Format};
pub use runner::{run_scenario, ResultTable, Row, RunError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("{0}")]
    Config(#[from] ConfigError),

    #[error("{0}")]
    Run(#[from] RunError),

    #[error("selftest failed: {0}")]
    Selftest(String),
}

impl AppError {
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Io { .. } => EXIT_IO,
            AppError::Config(_) => EXIT_CONFIG,
            AppError::Run(e) if e.is_numerical() => EXIT_NUMERICAL,
            // Domain and degenerate-state failures trace back to the config.
            AppError::Run(_) => EXIT_CONFIG,
            AppError::Selftest(_) => EXIT_NUMERICAL,
        }
    }
}

/// Reads and validates a config file; table paths resolve against its directory.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, AppError> {
    let text = fs::read_to_string(path).map_err(|source| AppError::Io {
        path: path.to_owned(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(parse_config_in(&text, base)?)
}
