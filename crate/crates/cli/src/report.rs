use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// The identity being verified, in words.
    pub anchor: String,
    pub status: Status,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub params: Value,
    pub checks: Vec<CheckRecord>,
    pub status: Status,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(suite: &str, params: Value) -> Self {
        Report {
            suite: suite.to_owned(),
            params,
            checks: Vec::new(),
            status: Status::Pass,
            elapsed_ms: 0,
        }
    }

    pub fn record(&mut self, name: impl Into<String>, anchor: &str, passed: bool, witness: Value) {
        self.checks.push(CheckRecord {
            name: name.into(),
            anchor: anchor.to_owned(),
            status: Status::from_bool(passed),
            witness,
        });
    }

    /// Records `Ok((passed, witness))`, or a failure carrying the error text.
    pub fn record_result<E: std::fmt::Display>(
        &mut self,
        name: impl Into<String>,
        anchor: &str,
        result: Result<(bool, Value), E>,
    ) {
        match result {
            Ok((ok, w)) => self.record(name, anchor, ok, w),
            Err(e) => self.record(name, anchor, false, serde_json::json!({ "error": e.to_string() })),
        }
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// Sorts checks by name and sets the overall status.
    pub fn finish(mut self, elapsed_ms: u64) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self.status = Status::from_bool(self.checks.iter().all(|c| c.status == Status::Pass));
        self.elapsed_ms = elapsed_ms;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(4).max(4);
        let mut out = String::new();
        writeln!(out, "suite: {}", self.suite).unwrap();
        writeln!(out, "params: {}", self.params).unwrap();
        writeln!(out, "{:<width$}  {:<6}  anchor", "name", "status").unwrap();
        for c in &self.checks {
            writeln!(out, "{:<width$}  {:<6}  {}", c.name, c.status.as_str(), c.anchor).unwrap();
        }
        let failed = self.failures().count();
        writeln!(
            out,
            "status: {} ({} checks, {} failed, {} ms)",
            self.status.as_str(),
            self.checks.len(),
            failed,
            self.elapsed_ms
        )
        .unwrap();
        out
    }
}
