//! Runner behind the `piq-lab` binary: loads a config, dispatches to the
//! library, and writes a JSON report.

pub mod commands;
pub mod config;
pub mod expr;

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

pub use commands::{run, CommandKind};
pub use config::ExperimentConfig;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] piq_lab::error::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        use piq_lab::error::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::InvarianceViolated(_)) => 3,
            CliError::Core(E::ExtensionRequired(_) | E::NoRootInField(_)) => 4,
            CliError::Core(E::PrecisionLoss(_)) => 5,
            CliError::Core(E::SearchExhausted(_)) => 6,
            _ => 1,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub artifact_version: &'static str,
    pub command: String,
    pub config: ExperimentConfig,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = std::fs::File::create(&tmp)?;
    f.write_all(contents.as_bytes())?;
    f.sync_all()?;
    drop(f);
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}
