//! Run reports and their text and JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// No expectation was given and the internal checks held.
    Info,
    /// The check raised an error nobody expected.
    Error,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Info => "INFO",
            Verdict::Error => "ERROR",
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fail | Verdict::Error)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub kind: String,
    pub inputs: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Map<String, Value>>,
    pub verdict: Verdict,
    pub summary: String,
    /// Values compared against `expect`.
    pub observed: Map<String, Value>,
    /// Witnesses and other supporting data.
    pub evidence: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
    /// Expectation keys whose observed value differed.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mismatches: Vec<String>,
    pub duration_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub info: usize,
    pub error: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    pub field: String,
    pub status: Status,
    pub counts: Counts,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(scenario: Option<String>, field: String, checks: Vec<CheckRecord>) -> Self {
        let mut counts = Counts::default();
        for c in &checks {
            match c.verdict {
                Verdict::Pass => counts.pass += 1,
                Verdict::Fail => counts.fail += 1,
                Verdict::Info => counts.info += 1,
                Verdict::Error => counts.error += 1,
            }
        }
        let status = if counts.fail + counts.error == 0 { Status::Pass } else { Status::Fail };
        Self { schema_version: REPORT_SCHEMA_VERSION, scenario, field, status, counts, checks }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One line per check, with the witness payload under failing checks.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let name = self.scenario.as_deref().unwrap_or("scenario");
        let _ = writeln!(out, "{name} over {}", self.field);
        for c in &self.checks {
            let _ = writeln!(out, "{:<5} {} [{}] {}", c.verdict.label(), c.name, c.kind, c.summary);
            if let Some(e) = &c.error {
                let _ = writeln!(out, "      error ({}): {}", e.kind, e.message);
            }
            if !c.mismatches.is_empty() {
                for key in &c.mismatches {
                    let expected = c.expect.as_ref().and_then(|e| e.get(key)).cloned().unwrap_or(Value::Null);
                    let got = c.observed.get(key).cloned().unwrap_or(Value::Null);
                    let _ = writeln!(out, "      expected {key} = {expected}, observed {got}");
                }
            }
            if c.verdict.is_failure() && !c.evidence.is_null() {
                let _ = writeln!(out, "      evidence: {}", c.evidence);
            }
        }
        let k = self.counts;
        let _ = writeln!(out, "{} passed, {} failed, {} errors, {} informational", k.pass, k.fail, k.error, k.info);
        out
    }

    /// The JSON report with every duration zeroed, for comparing runs.
    pub fn without_durations(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.duration_ms = 0;
        }
        r
    }
}
