//! Structured evidence produced by every check.

use std::fmt;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: Map<String, Value>,
    pub cases: u64,
    pub failures: Vec<Value>,
    pub status: Status,
    pub seed: u64,
    /// Observations that are recorded but not asserted.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<Value>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
}

impl CheckReport {
    pub fn new(check: &str, seed: u64) -> Self {
        CheckReport {
            check: check.to_string(),
            params: Map::new(),
            cases: 0,
            failures: Vec::new(),
            status: Status::Ok,
            seed,
            notes: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// One passing case.
    pub fn pass(&mut self) {
        self.cases += 1;
    }

    /// One failing case with its evidence.
    pub fn fail(&mut self, evidence: Value) {
        self.cases += 1;
        self.failures.push(evidence);
        self.status = Status::Fail;
    }

    /// Record a case that passes iff `ok`.
    pub fn expect(&mut self, ok: bool, evidence: impl FnOnce() -> Value) {
        if ok {
            self.pass();
        } else {
            self.fail(evidence());
        }
    }

    pub fn note(&mut self, v: Value) {
        self.notes.push(v);
    }

    /// Fold another report's cases into this one, keeping this id and params.
    pub fn absorb(&mut self, other: CheckReport) {
        self.cases += other.cases;
        if !other.failures.is_empty() {
            self.status = Status::Fail;
        }
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
        self.elapsed_ms += other.elapsed_ms;
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.is_ok() { "ok" } else { "FAIL" };
        write!(f, "{}: {status} ({} cases, {} failures, seed {})", self.check, self.cases, self.failures.len(), self.seed)?;
        for (k, v) in &self.params {
            write!(f, "\n  {k} = {v}")?;
        }
        for v in &self.failures {
            write!(f, "\n  failure: {v}")?;
        }
        for v in &self.notes {
            write!(f, "\n  note: {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn status_tracks_failures() {
        let mut r = CheckReport::new("demo", 0).with_param("p", 2);
        r.pass();
        assert!(r.is_ok());
        let mut other = CheckReport::new("demo", 0);
        other.fail(json!({"n": 1}));
        r.absorb(other);
        assert!(!r.is_ok());
        assert_eq!(r.cases, 2);
        let j = r.to_json();
        assert_eq!(j["status"], "fail");
        assert!(j.get("elapsed_ms").is_none());
        assert!(j.get("notes").is_none());
    }
}
