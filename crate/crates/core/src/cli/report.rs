//! Machine-readable reports: one CSV row per check, and a JSON document with
//! the configuration, fit diagnostics and environment.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::error::{Error, Result};
use crate::verify::{Check, Suite};

pub const CSV_VERSION: u32 = 1;
pub const JSON_VERSION: u32 = 1;
pub const CSV_COLUMNS: [&str; 8] =
    ["suite", "name", "parameters", "measured", "target", "tolerance", "comparison", "pass"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub package: String,
    pub version: String,
    pub target_os: String,
    pub target_arch: String,
}

impl Environment {
    #[must_use]
    pub fn current() -> Self {
        Self {
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            target_os: std::env::consts::OS.into(),
            target_arch: std::env::consts::ARCH.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

/// Everything needed to reproduce and audit a run. No timing is stored, so
/// identical configurations give identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format_version: u32,
    pub config: RunConfig,
    pub environment: Environment,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    #[must_use]
    pub fn new(config: RunConfig, suites: Vec<SuiteReport>) -> Self {
        let warnings = config.inexact_angles();
        Self { format_version: JSON_VERSION, config, environment: Environment::current(), warnings, suites }
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.suites.iter().flat_map(|s| s.checks.iter())
    }

    #[must_use]
    pub fn all_pass(&self) -> bool {
        self.checks().all(|c| c.pass)
    }

    #[must_use]
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("report JSON: {e}")))
    }

    /// CSV text: a version comment, the header row, then one row per check.
    #[must_use]
    pub fn to_csv(&self) -> String {
        let mut out = format!("# heatcorner checks csv v{CSV_VERSION}: {}\n", CSV_COLUMNS.join(","));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_COLUMNS).expect("in-memory write");
        for c in self.checks() {
            w.write_record([
                c.suite.name(),
                &c.name,
                &c.parameters,
                &format!("{:e}", c.measured),
                &format!("{:e}", c.target),
                &format!("{:e}", c.tolerance),
                c.comparison.name(),
                if c.pass { "true" } else { "false" },
            ])
            .expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields"));
        out
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}
