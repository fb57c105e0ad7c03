use std::time::Instant;

use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// First point where the two sides of an identity disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub key: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub check: String,
    pub params: Map<String, Value>,
    pub status: Status,
    pub witness: Option<Witness>,
    pub runtime_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("check".into(), json!(self.check));
        obj.insert("params".into(), Value::Object(self.params.clone()));
        obj.insert("status".into(), json!(self.status.as_str()));
        if let Some(w) = &self.witness {
            obj.insert("witness".into(), json!({"key": w.key, "lhs": w.lhs, "rhs": w.rhs}));
        }
        obj.insert("runtime_ms".into(), json!(self.runtime_ms));
        Value::Object(obj)
    }
}

/// Times `f` and wraps its witness (if any) into a report.
pub fn run_check(check: &str, params: Value, f: impl FnOnce() -> crate::Result<Option<Witness>>) -> crate::Result<VerificationReport> {
    let start = Instant::now();
    let witness = f()?;
    let params = match params {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    Ok(VerificationReport {
        check: check.to_string(),
        params,
        status: if witness.is_none() { Status::Pass } else { Status::Fail },
        witness,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}
