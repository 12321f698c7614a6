//! CSV emission and the run manifest.

use crate::CliError;
use emfcov::metrics::QuadratureSpec;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Sidecar describing how a set of output files was produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub config_path: Option<String>,
    /// Full configuration as TOML; re-parses to the same configuration.
    pub config_echo: String,
    pub config_hash: String,
    pub quadrature: String,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn path_for(out: &Path) -> PathBuf {
        let mut name = out.file_stem().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        out.with_file_name(name)
    }

    pub fn quadrature_text(quad: &QuadratureSpec) -> String {
        format!("{quad:?}")
    }

    pub fn write(&self, out: &Path) -> Result<PathBuf, CliError> {
        let path = Self::path_for(out);
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        std::fs::write(&path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}

/// Output path with `suffix` appended to the file stem.
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.file_stem().unwrap_or_default().to_os_string();
    name.push(suffix);
    name.push(".csv");
    out.with_file_name(name)
}

/// Writes a CSV with a mandatory header row.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}


pub fn decibel(v: f64) -> String {
    format!("{:.6}", 10.0 * v.log10())
}
