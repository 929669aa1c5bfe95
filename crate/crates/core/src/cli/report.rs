//! Structured run reports with deterministic serialization.

use crate::error::{Error, Result};
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not a failure, but the outcome needs a human look (e.g. a near-degenerate
    /// Petrov eigenvalue gap, or a check that does not apply to the family).
    Flagged,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub status: Status,
    pub worst_residual: f64,
    pub location: Option<Vec<f64>>,
    pub tolerance: f64,
    pub points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub detail: BTreeMap<String, Value>,
}

impl CheckReport {
    /// Pass when `worst < tolerance` (NaN fails).
    pub fn graded(worst: f64, location: Option<Vec<f64>>, tolerance: f64, points: usize) -> Self {
        let status = if worst < tolerance { Status::Pass } else { Status::Fail };
        CheckReport { status, worst_residual: worst, location, tolerance, points, note: None, detail: BTreeMap::new() }
    }

    pub fn flagged(note: impl Into<String>, tolerance: f64) -> Self {
        CheckReport {
            status: Status::Flagged,
            worst_residual: 0.0,
            location: None,
            tolerance,
            points: 0,
            note: Some(note.into()),
            detail: BTreeMap::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_detail(mut self, key: &str, value: impl Serialize) -> Self {
        self.detail.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub family: Option<String>,
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
    pub checks: BTreeMap<String, CheckReport>,
}

impl Report {
    pub fn new(command: &str, family: Option<String>, params: BTreeMap<String, f64>, seed: u64) -> Self {
        Report {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            family,
            params,
            seed,
            checks: BTreeMap::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.status != Status::Fail)
    }

    /// Key-ordered, pretty-printed JSON. Map keys come from `BTreeMap`s, so the
    /// output is a function of the report contents alone.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per check.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Io { path: "<csv>".into(), message: e.to_string() };
        w.write_record(["check", "status", "worst_residual", "tolerance", "points", "location"]).map_err(err)?;
        for (name, c) in &self.checks {
            let status = serde_json::to_value(c.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            let loc =
                c.location.as_ref().map(|l| l.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(" ")).unwrap_or_default();
            w.write_record([
                name.clone(),
                status,
                format!("{:e}", c.worst_residual),
                format!("{:e}", c.tolerance),
                c.points.to_string(),
                loc,
            ])
            .map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io { path: "<csv>".into(), message: e.to_string() })?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    /// Short human-readable lines for the terminal.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (name, c) in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Flagged => "flagged",
            };
            out.push_str(&format!("{name:<28} {status:<8} worst {:.3e} (tol {:.1e})", c.worst_residual, c.tolerance));
            if let Some(n) = &c.note {
                out.push_str(&format!("  [{n}]"));
            }
            out.push('\n');
        }
        out
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}
