//! Run manifest written next to every output set.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::output::write_json;
use super::run::ClaimOutcome;
use crate::analytics::PointFailure;
use crate::dynamics::IntegratorDiagnostics;
use crate::error::Result;
use crate::model::SystemParams;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunKind {
    Scenario,
    Sweep,
    PowerCompare,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub name: String,
    pub kind: RunKind,
    pub version: String,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
    /// The run configuration as given.
    pub spec: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolved_params: Option<SystemParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolved_dt: Option<f64>,
    pub files: Vec<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<IntegratorDiagnostics>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<ClaimOutcome>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<PointFailure>,
    pub partial: bool,
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn new<T: Serialize>(name: &str, kind: RunKind, spec: &T) -> Result<Self> {
        Ok(Self {
            name: name.to_owned(),
            kind,
            version: TOOL_VERSION.to_owned(),
            timestamp: timestamp(),
            spec: serde_json::to_value(spec)?,
            resolved_params: None,
            resolved_dt: None,
            files: Vec::new(),
            diagnostics: None,
            claims: Vec::new(),
            failures: Vec::new(),
            partial: false,
            warnings: Vec::new(),
        })
    }

    pub fn file_name(name: &str) -> String {
        format!("{name}_manifest.json")
    }

    /// Writes `dir/{name}_manifest.json` and returns its path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(Self::file_name(&self.name));
        write_json(&path, self)?;
        Ok(path)
    }

    /// True when nothing was flagged.
    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty() && !self.partial && self.claims.iter().all(|c| c.passed)
    }
}

fn timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse().ok())
    {
        return t;
    }
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
