use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// One named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub tolerance: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

/// Checks in the order they ran, plus wall-clock timings per stage.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub checks: Vec<CheckResult>,
    pub timings: Vec<Timing>,
}

impl RunReport {
    pub fn push(&mut self, name: impl Into<String>, measured: f64, tolerance: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            measured,
            tolerance: tolerance.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn time(&mut self, stage: impl Into<String>, seconds: f64) {
        self.timings.push(Timing { stage: stage.into(), seconds });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn extend(&mut self, other: RunReport) {
        self.checks.extend(other.checks);
        self.timings.extend(other.timings);
    }

    /// JSON text; timings are left out when `with_timings` is false so that
    /// repeated runs produce identical bytes.
    pub fn to_json(&self, with_timings: bool) -> String {
        let mut out = if with_timings {
            serde_json::to_string_pretty(self)
        } else {
            serde_json::to_string_pretty(&serde_json::json!({ "checks": self.checks }))
        }
        .expect("report serializes");
        out.push('\n');
        out
    }

    pub fn write(&self, path: &Path, with_timings: bool) -> Result<()> {
        std::fs::write(path, self.to_json(with_timings)).map_err(|e| Error::io(path, e))
    }

    /// One line per check: `PASS name: measured (tolerance) detail`.
    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                let detail = if c.detail.is_empty() { String::new() } else { format!(" {}", c.detail) };
                format!("{tag} {}: {:.6e} ({}){detail}", c.name, c.measured, c.tolerance)
            })
            .collect()
    }
}
