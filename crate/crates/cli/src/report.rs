use nilmassey_core::Cochain;
use serde::Serialize;
use serde_json::{json, Value};

/// A 1-cochain as `[c(g)]`, a 2-cochain as `[[c(g, h)]]`; rank-one values
/// are bare numbers.
pub fn cochain_json(c: &Cochain) -> Value {
    let order = c.group().order();
    let value = |t: &[usize]| -> Value {
        let v = c.value(t);
        if v.len() == 1 {
            json!(v[0])
        } else {
            json!(v)
        }
    };
    match c.degree() {
        0 => value(&[]),
        1 => Value::Array((0..order).map(|g| value(&[g])).collect()),
        2 => Value::Array((0..order).map(|g| Value::Array((0..order).map(|h| value(&[g, h])).collect())).collect()),
        _ => Value::Array(c.tuples().map(|t| json!({ "tuple": t, "value": value(&t) })).collect()),
    }
}

/// One identity checked by a suite.
#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub cases: u64,
    pub skipped: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl Check {
    pub fn new(name: &str) -> Self {
        Check { name: name.to_string(), cases: 0, skipped: 0, passed: true, counterexample: None, detail: None }
    }

    /// Records one case; keeps the first counterexample.
    pub fn record(&mut self, ok: bool, counterexample: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok && self.passed {
            self.passed = false;
            self.counterexample = Some(counterexample());
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub command: &'static str,
    pub suite: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn new(suite: &str, config: Value, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        SuiteReport { command: "verify", suite: suite.to_string(), config, checks, passed }
    }
}
