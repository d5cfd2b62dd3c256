//! Combining report files into one table.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{io_err, Error, Result};
use crate::report::{Origin, Report, Status, SCHEMA};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub source: String,
    pub check: String,
    pub expected: Value,
    pub origin: Origin,
    pub computed: Value,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Merged {
    pub schema: String,
    pub rows: Vec<Row>,
    pub primes: Vec<u64>,
    /// Set when the inputs were computed over different primes.
    pub prime_conflict: bool,
}

impl Merged {
    /// Clean when no row failed and all inputs share a prime.
    pub fn ok(&self) -> bool {
        !self.prime_conflict && self.rows.iter().all(|r| !r.status.is_failure())
    }
}

pub fn read_report(path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let v: Value = serde_json::from_str(&text).map_err(|source| Error::Json { path: path.into(), source })?;
    let found = v.get("schema").and_then(Value::as_str).unwrap_or("").to_string();
    if found != SCHEMA {
        return Err(Error::Schema { path: path.into(), found });
    }
    serde_json::from_value(v).map_err(|source| Error::Json { path: path.into(), source })
}

pub fn merge(paths: &[PathBuf]) -> Result<Merged> {
    let mut rows = Vec::new();
    let mut primes = BTreeSet::new();
    for p in paths {
        let r = read_report(p)?;
        primes.insert(r.config.prime);
        let source = p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned());
        for c in r.checks {
            rows.push(Row { source: source.clone(), check: c.name, expected: c.expected, origin: c.origin, computed: c.computed, status: c.status });
        }
    }
    let primes: Vec<u64> = primes.into_iter().collect();
    Ok(Merged { schema: SCHEMA.into(), prime_conflict: primes.len() > 1, primes, rows })
}

const MAX_CELL: usize = 40;

fn cell(v: &Value) -> String {
    let s = match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if s.chars().count() > MAX_CELL {
        let mut t: String = s.chars().take(MAX_CELL - 3).collect();
        t.push_str("...");
        t
    } else {
        s
    }
}

fn origin_name(o: Origin) -> &'static str {
    match o {
        Origin::Claimed => "claimed",
        Origin::Derived => "derived",
        Origin::Trivial => "trivial",
        Origin::Exploratory => "exploratory",
    }
}

/// Fixed-width text table, one line per row.
pub fn table(m: &Merged) -> String {
    let header = ["check", "expected", "origin", "computed", "status"];
    let body: Vec<[String; 5]> = m
        .rows
        .iter()
        .map(|r| {
            [
                format!("{} / {}", r.source, r.check),
                cell(&r.expected),
                origin_name(r.origin).into(),
                cell(&r.computed),
                r.status.name().into(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &body {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &[String]| {
        let parts: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut out, &header.map(String::from));
    for row in &body {
        line(&mut out, row);
    }
    if m.prime_conflict {
        let _ = writeln!(out, "conflicting primes across reports: {:?}", m.primes);
    }
    out
}
