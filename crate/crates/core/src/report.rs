//! Pass/fail records shared by every verification routine.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self, check: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(CheckOutcome {
            check: check.into(),
            passed: true,
            detail: Some(detail.into()),
            witness: None,
        });
    }

    pub fn fail(&mut self, check: impl Into<String>, detail: impl Into<String>, witness: Value) {
        self.checks.push(CheckOutcome {
            check: check.into(),
            passed: false,
            detail: Some(detail.into()),
            witness: Some(witness),
        });
    }

    /// Records `outcome` as a pass or a failure carrying the witness.
    pub fn record(&mut self, check: &str, outcome: Result<String, (String, Value)>) {
        match outcome {
            Ok(detail) => self.pass(check, detail),
            Err((detail, witness)) => self.fail(check, detail, witness),
        }
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, check: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.check == check)
    }
}
