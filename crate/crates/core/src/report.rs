//! Machine-readable verification reports.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cylinder::CylinderFunction;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Certificate,
    Witness,
}

impl Status {
    /// Pass and certificate count as success.
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::Certificate)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Certificate => "certificate",
            Status::Witness => "witness",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub check: String,
    pub parameters: BTreeMap<String, String>,
    pub status: Status,
    /// Number of exact instances examined.
    pub instances: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub checks: Vec<CheckEntry>,
}

impl Default for VerificationReport {
    fn default() -> Self {
        Self::new()
    }
}

impl VerificationReport {
    pub fn new() -> Self {
        VerificationReport {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest: None,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.checks.push(entry);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.status.is_ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.checks.iter().filter(|c| !c.status.is_ok())
    }

    /// Entries whose check name equals `name`.
    pub fn named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a CheckEntry> + 'a {
        self.checks.iter().filter(move |c| c.check == name)
    }

    /// Total instances across all entries.
    pub fn instances(&self) -> usize {
        self.checks.iter().map(|c| c.instances).sum()
    }
}

/// Accumulates the instances of one check and keeps the first failure.
pub struct Tally {
    check: String,
    parameters: BTreeMap<String, String>,
    instances: usize,
    witness: Option<Value>,
    note: Option<String>,
}

impl Tally {
    pub fn new(check: &str) -> Self {
        Tally {
            check: check.to_string(),
            parameters: BTreeMap::new(),
            instances: 0,
            witness: None,
            note: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Records one instance; `witness` is only built for the first failure.
    pub fn observe(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.instances += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    /// Records an instance that could not be evaluated.
    pub fn error(&mut self, err: impl fmt::Display) {
        self.observe(false, || serde_json::json!({ "error": err.to_string() }));
    }

    pub fn failed(&self) -> bool {
        self.witness.is_some()
    }

    pub fn finish(self) -> CheckEntry {
        let status = if self.witness.is_some() {
            Status::Fail
        } else {
            Status::Pass
        };
        self.finish_with(status)
    }

    pub fn finish_with(self, status: Status) -> CheckEntry {
        CheckEntry {
            check: self.check,
            parameters: self.parameters,
            status,
            instances: self.instances,
            witness: self.witness,
            note: self.note,
        }
    }

    /// Ends with an explicit status and witness payload.
    pub fn finish_witness(mut self, status: Status, witness: Value) -> CheckEntry {
        self.witness = Some(witness);
        self.finish_with(status)
    }
}

/// Display form of a function for witnesses: smallest depth, word-keyed
/// table.
pub fn function_json<S: Scalar>(f: &CylinderFunction<S>) -> Value {
    let f = f.normalized();
    let table: BTreeMap<String, String> = f
        .entries()
        .map(|(w, v)| (w.to_string(), v.to_string()))
        .collect();
    json!({ "depth": f.depth(), "table": table })
}
