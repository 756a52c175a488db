//! The JSON report printed on stdout and the helpers that render exact values.

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use treejacobi::exactmath::{format_gaussian, format_rational, GaussianRational, Poly, Rational, RootSet};

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub ok: bool,
}

#[derive(Debug, Serialize)]
pub struct Command {
    pub name: String,
    pub args: Map<String, Value>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Command,
    pub inputs_digest: String,
    pub results: Value,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

/// Accumulates a report while a subcommand runs.
pub struct ReportBuilder {
    command: Command,
    hasher: Sha256,
    results: Map<String, Value>,
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl ReportBuilder {
    pub fn new(name: &str, args: Map<String, Value>) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(name.as_bytes());
        hasher.update([0]);
        hasher.update(Value::Object(args.clone()).to_string().as_bytes());
        ReportBuilder { command: Command { name: name.into(), args }, hasher, results: Map::new(), checks: Vec::new(), notes: Vec::new() }
    }

    /// Mixes an input document into the digest.
    pub fn input(&mut self, label: &str, bytes: &[u8]) {
        self.hasher.update([0]);
        self.hasher.update(label.as_bytes());
        self.hasher.update([0]);
        self.hasher.update(bytes);
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report values serialize");
        self.results.insert(key.into(), value);
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    /// A line for the human summary on stderr.
    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn finish(self) -> (Report, Vec<String>) {
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let failed = self.checks.len() - passed;
        let report = Report {
            command: self.command,
            inputs_digest: format!("sha256:{}", hex::encode(self.hasher.finalize())),
            results: Value::Object(self.results),
            summary: Summary { checks: self.checks.len(), passed, failed, ok: failed == 0 },
            checks: self.checks,
        };
        (report, self.notes)
    }
}

pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn gaussian(w: &GaussianRational) -> Value {
    Value::String(format_gaussian(w))
}

pub fn rationals(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(rational).collect())
}

/// `{"degree", "coefficients" (lowest first), "text"}`.
pub fn poly(p: &Poly) -> Value {
    json!({
        "degree": p.degree(),
        "coefficients": p.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
        "text": p.pretty(),
    })
}

/// Isolating intervals `[lo, hi]` with multiplicities, in increasing order.
pub fn roots(set: &RootSet) -> Value {
    Value::Array(
        set.roots
            .iter()
            .map(|r| json!({ "lo": format_rational(&r.lo), "hi": format_rational(&r.hi), "multiplicity": r.multiplicity }))
            .collect(),
    )
}
