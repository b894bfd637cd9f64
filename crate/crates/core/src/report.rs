//! Uniform check results shared by all suites.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// The result of one named check, with the first counterexample on failure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    pub detail: String,
}

impl CheckOutcome {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            status: Status::Pass,
            counterexample: None,
            detail: detail.into(),
        }
    }

    pub fn fail(name: impl Into<String>, counterexample: Value, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            status: Status::Fail,
            counterexample: Some(counterexample),
            detail: detail.into(),
        }
    }

    pub fn skipped(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            status: Status::Skipped,
            counterexample: None,
            detail: detail.into(),
        }
    }

    /// Pass when `counterexample` is `None`, fail otherwise.
    pub fn from_search(
        name: impl Into<String>,
        counterexample: Option<Value>,
        detail: impl Into<String>,
    ) -> Self {
        match counterexample {
            None => Self::pass(name, detail),
            Some(c) => Self::fail(name, c, detail),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// True when no outcome failed.
pub fn all_ok(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| !o.failed())
}
