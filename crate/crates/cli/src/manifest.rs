use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use mastflow::campaign::CaseRow;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseStatus {
    pub design: String,
    #[serde(rename = "U_mps")]
    pub u: f64,
    pub status: String,
    pub error: Option<String>,
    pub steps: u64,
    pub wall_seconds: f64,
}

impl From<&CaseRow> for CaseStatus {
    fn from(row: &CaseRow) -> Self {
        CaseStatus {
            design: row.design.clone(),
            u: row.u,
            status: if row.is_ok() { "ok" } else { "failed" }.into(),
            error: row.error.clone(),
            steps: row.steps,
            wall_seconds: row.wall_seconds,
        }
    }
}

/// Record of one CLI invocation. Timestamps and wall times live here only,
/// so every other output is reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub artifact_version: String,
    pub config_digest: String,
    pub started: String,
    pub finished: String,
    pub cases: Vec<CaseStatus>,
    /// Files written, relative to the output directory.
    pub outputs: Vec<String>,
    pub notes: Vec<String>,
}

pub fn timestamp() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn start(command: &str, config_digest: String) -> Self {
        RunManifest {
            command: command.into(),
            artifact_version: env!("CARGO_PKG_VERSION").into(),
            config_digest,
            started: timestamp(),
            finished: String::new(),
            cases: Vec::new(),
            outputs: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn record_outputs(&mut self, out_dir: &Path, paths: &[PathBuf]) {
        for p in paths {
            let rel = p.strip_prefix(out_dir).unwrap_or(p);
            self.outputs.push(rel.to_string_lossy().replace('\\', "/"));
        }
    }

    /// Stamps the end time and writes `manifest.json` into `out_dir`.
    pub fn finish(mut self, out_dir: &Path) -> Result<PathBuf, CliError> {
        self.finished = timestamp();
        self.outputs.sort();
        self.outputs.dedup();
        let path = out_dir.join("manifest.json");
        let text = serde_json::to_string_pretty(&self).expect("manifest serializes") + "\n";
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}
