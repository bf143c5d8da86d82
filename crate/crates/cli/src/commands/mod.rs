pub mod gq;
pub mod hyperoval;
pub mod lattice;
pub mod report;
pub mod singer;

use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;
use singer_core::Field;

use crate::error::CliError;

pub fn field(q: u32) -> Result<Arc<Field>, CliError> {
    Field::of_order(q)
        .map(Arc::new)
        .map_err(|e| CliError::Usage(format!("q = {q}: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    /// Computed and reported without a pass/fail claim attached.
    Info,
}

/// One checked claim: what was expected, what was observed, and on failure a
/// machine-readable witness.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimRow {
    pub id: String,
    pub claim: String,
    pub status: Status,
    pub expected: Value,
    pub observed: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl ClaimRow {
    pub fn check(id: impl Into<String>, claim: impl Into<String>, expected: Value, observed: Value) -> ClaimRow {
        let status = if expected == observed {
            Status::Pass
        } else {
            Status::Fail
        };
        let witness =
            (status == Status::Fail).then(|| serde_json::json!({ "expected": expected, "observed": observed }));
        ClaimRow {
            id: id.into(),
            claim: claim.into(),
            status,
            expected,
            observed,
            witness,
        }
    }

    pub fn info(id: impl Into<String>, claim: impl Into<String>, observed: Value) -> ClaimRow {
        ClaimRow {
            id: id.into(),
            claim: claim.into(),
            status: Status::Info,
            expected: Value::Null,
            observed,
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: Value) -> ClaimRow {
        if self.status == Status::Fail {
            self.witness = Some(witness);
        }
        self
    }
}

pub fn any_failed(rows: &[ClaimRow]) -> bool {
    rows.iter().any(|r| r.status == Status::Fail)
}
