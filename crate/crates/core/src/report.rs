//! Machine-readable outcome of a single verification.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    /// Plain-language statement of what was verified.
    pub statement: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    pub runtime_ms: u64,
}

impl CheckReport {
    pub fn new(check_id: impl Into<String>, statement: impl Into<String>) -> Self {
        CheckReport {
            check_id: check_id.into(),
            statement: statement.into(),
            params: BTreeMap::new(),
            status: Status::Pass,
            expected: String::new(),
            actual: String::new(),
            runtime_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Records the comparison; a mismatch marks the report failed.
    pub fn compare(mut self, expected: impl Display, actual: impl Display) -> Self {
        self.expected = expected.to_string();
        self.actual = actual.to_string();
        if self.expected != self.actual {
            self.status = Status::Fail;
        }
        self
    }

    pub fn outcome(mut self, ok: bool, expected: impl Display, actual: impl Display) -> Self {
        self.expected = expected.to_string();
        self.actual = actual.to_string();
        self.status = if ok { Status::Pass } else { Status::Fail };
        self
    }

    pub fn skipped(mut self, why: impl Display) -> Self {
        self.status = Status::Skipped;
        self.actual = why.to_string();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Runs `f` and stores its wall-clock time on the report it returns.
    pub fn timed(f: impl FnOnce() -> CheckReport) -> CheckReport {
        let start = Instant::now();
        let mut r = f();
        r.runtime_ms = start.elapsed().as_millis() as u64;
        r
    }
}

impl Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        write!(f, "[{tag}] {}", self.check_id)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        if self.status == Status::Fail {
            write!(f, " expected={} actual={}", self.expected, self.actual)?;
        }
        Ok(())
    }
}
