//! Machine-readable run reports: JSON, plus CSV for tables.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::config::ExperimentConfig;

/// One assertion and its outcome; failures carry a witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, detail: detail.into(), witness: None }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>, witness: Option<Value>) -> Self {
        Check { name: name.into(), passed: false, detail: detail.into(), witness }
    }

    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>, witness: Option<Value>) -> Self {
        Check { name: name.into(), passed, detail: detail.into(), witness: if passed { None } else { witness } }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub seconds: f64,
    pub checks: Vec<Check>,
    /// Measured quantities, keyed by name.
    pub measured: BTreeMap<String, Value>,
    pub tables: BTreeMap<String, Table>,
}

impl SuiteReport {
    pub fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            passed: true,
            seconds: 0.0,
            checks: Vec::new(),
            measured: BTreeMap::new(),
            tables: BTreeMap::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn measure(&mut self, key: &str, v: impl Serialize) {
        self.measured.insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn finish(mut self, elapsed: Duration) -> Self {
        self.seconds = elapsed.as_secs_f64();
        self.passed = self.checks.iter().all(|c| c.passed);
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub passed: bool,
    pub config: ExperimentConfig,
    pub suites: Vec<SuiteReport>,
}

impl RunReport {
    pub fn new(config: ExperimentConfig, suites: Vec<SuiteReport>) -> Self {
        RunReport { passed: suites.iter().all(|s| s.passed), config, suites }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Writes `report.json` and one `<suite>_<table>.csv` per table into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        std::fs::write(dir.join("report.json"), self.to_json_string())?;
        for s in &self.suites {
            for (name, t) in &s.tables {
                std::fs::write(dir.join(format!("{}_{}.csv", s.name, name)), t.to_csv()?)?;
            }
        }
        Ok(())
    }

    /// One line per suite, then one per failed check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let verdict = if s.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{verdict} {} ({} checks, {:.1} s)\n", s.name, s.checks.len(), s.seconds));
            for c in s.failures() {
                out.push_str(&format!("  failed: {}: {}\n", c.name, c.detail));
            }
        }
        out
    }
}
