//! Versioned JSON reports and their content hash.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use qmf_core::{Fe, FieldSpec};

pub const SCHEMA: &str = "1";

/// Everything needed to reproduce a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub task: String,
    pub prime: u64,
    pub seed: u64,
    pub trials: Option<usize>,
    pub family: Option<String>,
    pub i: Option<usize>,
    pub case: Option<String>,
    pub extended: bool,
    pub threads: usize,
    pub timeout_s: u64,
    pub out: Option<String>,
}

impl RunConfig {
    pub fn new(task: &str, prime: u64, seed: u64) -> Self {
        RunConfig {
            task: task.into(),
            prime,
            seed,
            trials: None,
            family: None,
            i: None,
            case: None,
            extended: false,
            threads: 1,
            timeout_s: 4 * 3600,
            out: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A value without an asserted expectation.
    Recorded,
    Timeout,
}

impl Status {
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::Timeout)
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Recorded => "recorded",
            Status::Timeout => "timeout",
        }
    }
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    /// A result stated in the literature being reproduced.
    Claimed,
    /// Follows from the construction by a short argument.
    Derived,
    /// Immediate from definitions.
    Trivial,
    /// No expectation; the value is recorded.
    Exploratory,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub origin: Origin,
    pub computed: Value,
    pub status: Status,
}

impl Check {
    /// Passes iff `computed == expected`.
    pub fn expect(name: impl Into<String>, origin: Origin, expected: impl Serialize, computed: impl Serialize) -> Self {
        let (expected, computed) = (json!(expected), json!(computed));
        let status = if expected == computed { Status::Pass } else { Status::Fail };
        Check { name: name.into(), expected, origin, computed, status }
    }

    /// Passes iff `ok`; `expected` describes the requirement.
    pub fn holds(name: impl Into<String>, origin: Origin, expected: impl Serialize, computed: impl Serialize, ok: bool) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Check { name: name.into(), expected: json!(expected), origin, computed: json!(computed), status }
    }

    pub fn record(name: impl Into<String>, computed: impl Serialize) -> Self {
        Check { name: name.into(), expected: Value::Null, origin: Origin::Exploratory, computed: json!(computed), status: Status::Recorded }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: String,
    pub task: String,
    pub config: RunConfig,
    pub status: Status,
    pub checks: Vec<Check>,
    /// Task-specific payload.
    pub data: Value,
    pub elapsed_ms: u64,
    pub hash: String,
}

/// Overall status: any failure fails, otherwise any pass passes.
pub fn combine(statuses: impl IntoIterator<Item = Status>) -> Status {
    let mut out = Status::Recorded;
    for s in statuses {
        match s {
            Status::Fail | Status::Timeout => return s,
            Status::Pass => out = Status::Pass,
            Status::Recorded => {}
        }
    }
    out
}

impl Report {
    pub fn new(config: RunConfig, checks: Vec<Check>, data: Value, elapsed_ms: u64) -> Self {
        let status = combine(checks.iter().map(|c| c.status));
        let mut r = Report {
            schema: SCHEMA.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            task: config.task.clone(),
            config,
            status,
            checks,
            data,
            elapsed_ms,
            hash: String::new(),
        };
        r.hash = r.content_hash();
        r
    }

    /// SHA-256 of the report with every `elapsed_ms` and `hash` field removed,
    /// at any depth.
    pub fn content_hash(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        strip_volatile(&mut v);
        let bytes = serde_json::to_vec(&v).expect("value serializes");
        hex(&Sha256::digest(&bytes))
    }

    /// A report for a run abandoned after `timeout_s` seconds.
    pub fn timed_out(config: RunConfig, elapsed_ms: u64) -> Self {
        let check = Check {
            name: "completes".into(),
            expected: json!(format!("within {} s", config.timeout_s)),
            origin: Origin::Trivial,
            computed: Value::Null,
            status: Status::Timeout,
        };
        Report::new(config, vec![check], Value::Null, elapsed_ms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn strip_volatile(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.remove("hash");
            m.values_mut().for_each(strip_volatile);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_volatile),
        _ => {}
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Field elements as signed integers over `F_p`, as `"a+b*i"` over `F_{p²}`.
pub fn fe_json(field: &FieldSpec, x: Fe) -> Value {
    if field.ext_mode() {
        Value::String(x.to_string())
    } else {
        json!(field.signed(x))
    }
}

pub fn object(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_elapsed_time() {
        let cfg = RunConfig::new("verify", 313, 1);
        let a = Report::new(cfg.clone(), vec![Check::expect("x", Origin::Trivial, 1, 1)], json!({"k": 2}), 5);
        let b = Report::new(cfg, vec![Check::expect("x", Origin::Trivial, 1, 1)], json!({"k": 2}), 900);
        assert_eq!(a.hash, b.hash);
        assert_eq!(a.status, Status::Pass);
    }

    #[test]
    fn status_combination() {
        assert_eq!(combine([]), Status::Recorded);
        assert_eq!(combine([Status::Recorded, Status::Pass]), Status::Pass);
        assert_eq!(combine([Status::Pass, Status::Fail, Status::Pass]), Status::Fail);
    }
}
