//! Report types and writers.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// an identity or constant-free inequality; failing it fails the run
    Hard,
    /// drift of an empirical constant under refinement; failing it fails the run
    Stability,
    /// recorded only
    Info,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub kind: CheckKind,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `value ≤ tolerance`.
    pub fn at_most(id: &str, kind: CheckKind, value: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self { id: id.into(), kind, passed: value <= tolerance, value, tolerance, detail: detail.into() }
    }

    /// Passes when `value ≥ tolerance` (slacks).
    pub fn at_least(id: &str, kind: CheckKind, value: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self { id: id.into(), kind, passed: value >= tolerance, value, tolerance, detail: detail.into() }
    }

    pub fn fails_run(&self) -> bool {
        !self.passed && self.kind != CheckKind::Info
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Skipped {
    pub id: String,
    pub reason: String,
}

/// A CSV table; every row is suffixed with the config hash on write.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub skipped: Vec<Skipped>,
    pub tables: Vec<Table>,
    /// set when the suite aborted
    pub error: Option<String>,
}

impl SuiteReport {
    pub fn new(name: &str) -> Self {
        Self { name: name.into(), passed: true, checks: Vec::new(), skipped: Vec::new(), tables: Vec::new(), error: None }
    }

    pub fn check(&mut self, c: Check) {
        log::debug!("{}: {} = {:e} (tolerance {:e})", c.id, if c.passed { "ok" } else { "FAILED" }, c.value, c.tolerance);
        self.checks.push(c);
    }

    pub fn skip(&mut self, id: &str, reason: impl Into<String>) {
        self.skipped.push(Skipped { id: id.into(), reason: reason.into() });
    }

    pub fn finish(mut self) -> Self {
        self.passed = self.error.is_none() && !self.checks.iter().any(Check::fails_run);
        self
    }

    pub fn failing(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.checks.iter().filter(|c| c.fails_run()).map(|c| c.id.clone()).collect();
        if let Some(e) = &self.error {
            ids.push(format!("{}.error: {e}", self.name));
        }
        ids
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub suites: usize,
    pub passed: usize,
    pub failed: usize,
    pub checks: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    /// seconds since the Unix epoch
    pub generated_at: u64,
    pub config_hash: String,
    pub geometry: String,
    pub config: RunConfig,
    pub suites: Vec<SuiteReport>,
    pub summary: Summary,
}

impl Report {
    pub fn new(cfg: &RunConfig, geometry: String, suites: Vec<SuiteReport>) -> Self {
        let summary = Summary {
            suites: suites.len(),
            passed: suites.iter().filter(|s| s.passed).count(),
            failed: suites.iter().filter(|s| !s.passed).count(),
            checks: suites.iter().map(|s| s.checks.len()).sum(),
            skipped: suites.iter().map(|s| s.skipped.len()).sum(),
        };
        let generated_at =
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Self { schema_version: SCHEMA_VERSION, generated_at, config_hash: cfg.hash(), geometry, config: cfg.clone(), suites, summary }
    }

    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        let cfg = &self.config;
        if cfg.wants("json") {
            let text = serde_json::to_string_pretty(self)?;
            fs::write(dir.join("report.json"), text + "\n")?;
        }
        if cfg.wants("csv") {
            let tdir = dir.join("tables");
            fs::create_dir_all(&tdir)?;
            for s in &self.suites {
                for t in &s.tables {
                    let mut w = csv::Writer::from_path(tdir.join(format!("{}.csv", t.name)))?;
                    let mut header = t.header.clone();
                    header.push("config_hash".into());
                    w.write_record(&header)?;
                    for r in &t.rows {
                        let mut row = r.clone();
                        row.push(self.config_hash.clone());
                        w.write_record(&row)?;
                    }
                    w.flush()?;
                }
            }
        }
        if cfg.wants("summary") {
            fs::write(dir.join("summary.txt"), self.summary_text())?;
        }
        Ok(())
    }

    pub fn summary_text(&self) -> String {
        let mut out = format!(
            "klab report (schema {}), geometry {}, config {}\n",
            self.schema_version, self.geometry, self.config_hash
        );
        for s in &self.suites {
            out += &format!("\n[{}] {}\n", if s.passed { "PASS" } else { "FAIL" }, s.name);
            for c in &s.checks {
                let mark = match (c.passed, c.kind) {
                    (true, _) => "ok  ",
                    (false, CheckKind::Info) => "note",
                    (false, _) => "FAIL",
                };
                out += &format!("  {mark} {:<34} {:>11.3e} (tol {:.1e})  {}\n", c.id, c.value, c.tolerance, c.detail);
            }
            for k in &s.skipped {
                out += &format!("  skip {:<34} {}\n", k.id, k.reason);
            }
            if let Some(e) = &s.error {
                out += &format!("  error: {e}\n");
            }
        }
        out += &format!(
            "\n{} of {} suites passed, {} checks, {} skipped\n",
            self.summary.passed, self.summary.suites, self.summary.checks, self.summary.skipped
        );
        out
    }
}

/// Shortest round-trip formatting, so CSV output is byte-stable.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}
