use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

/// One check. `timing_ms` is the wall time of the computation that produced it
/// and is the only field allowed to differ between runs.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub name: String,
    pub ok: bool,
    pub summary: String,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub timing_ms: f64,
}

impl Record {
    pub fn new(name: impl Into<String>, ok: bool, summary: impl Into<String>) -> Self {
        Record {
            name: name.into(),
            ok,
            summary: summary.into(),
            residual: None,
            tolerance: None,
            timing_ms: 0.0,
        }
    }

    /// `ok` iff `residual <= tolerance` (and finite).
    pub fn measured(name: impl Into<String>, residual: f64, tolerance: f64, summary: impl Into<String>) -> Self {
        Record {
            residual: Some(residual),
            tolerance: Some(tolerance),
            ..Record::new(name, residual.is_finite() && residual <= tolerance, summary)
        }
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.timing_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    /// Resolved settings, defaults included.
    pub config: BTreeMap<String, String>,
    pub records: Vec<Record>,
    /// Files written by the command.
    pub artifacts: Vec<String>,
    pub ok: bool,
}

impl Report {
    pub fn new(command: &str, config: BTreeMap<String, String>) -> Self {
        Report {
            command: command.to_string(),
            config,
            records: Vec::new(),
            artifacts: Vec::new(),
            ok: true,
        }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    /// Sorts records by name and sets the overall verdict.
    pub fn finish(mut self) -> Self {
        self.records.sort_by(|a, b| a.name.cmp(&b.name));
        self.ok = self.records.iter().all(|r| r.ok);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "vlasym {}", self.command);
        for (k, v) in &self.config {
            let _ = writeln!(s, "  {k} = {v}");
        }
        let width = self.records.iter().map(|r| r.name.len()).max().unwrap_or(0);
        for r in &self.records {
            let tag = if r.ok { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{tag}  {:width$}  {}", r.name, r.summary);
        }
        for a in &self.artifacts {
            let _ = writeln!(s, "wrote {a}");
        }
        let passed = self.records.iter().filter(|r| r.ok).count();
        let verdict = if self.ok { "ok" } else { "FAIL" };
        let _ = writeln!(s, "overall: {verdict} ({passed}/{} checks)", self.records.len());
        s
    }
}
