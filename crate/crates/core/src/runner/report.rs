use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;

pub const TOOL_VERSION: &str = concat!("k3cone ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    AssumedByPaper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimReport {
    pub id: String,
    pub status: Status,
    pub certificate: Value,
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub scenario: String,
    pub claims: Vec<ClaimReport>,
    pub tool_version: String,
}

impl Report {
    pub fn new(scenario: &str, claims: Vec<ClaimReport>) -> Self {
        Report { scenario: scenario.into(), claims, tool_version: TOOL_VERSION.into() }
    }

    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("report serializes"))
    }
}

/// Pretty JSON with sorted object keys and a trailing newline.
pub fn canonical_json(v: &Value) -> String {
    // serde_json's default map is ordered by key, so a round trip through Value sorts.
    let sorted: Value = serde_json::from_str(&v.to_string()).expect("valid json");
    let mut s = serde_json::to_string_pretty(&sorted).expect("serializable");
    s.push('\n');
    s
}

pub fn emit_report(report: &Report, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, report.to_json())
}

pub fn read_report(path: &Path) -> Result<Report, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("report parse error: {e}"))
}
