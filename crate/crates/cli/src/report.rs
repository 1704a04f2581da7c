//! Report envelope shared by every subcommand, and its json / csv / text renderings.

use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Identifiers for the mathematical claim a check reproduces.
pub mod claim {
    pub const HYPOTHESES: &str = "family-hypotheses";
    pub const FIBER_TABLE: &str = "fiber-table";
    pub const MW_RANK_ZERO: &str = "mw-rank-zero";
    pub const CUBE_B_RANK_TWO: &str = "cube-b-rank-two";
    pub const K2_NO_SECTION: &str = "k2-no-section";
    pub const K6N_EVIDENCE: &str = "k6n-section-evidence";
    pub const HEIGHTS: &str = "height-matrices";
    pub const FROBENIUS: &str = "frobenius-matrices";
    pub const RELATIONS: &str = "section-relations";
    pub const ISOMORPHISM: &str = "kuwata-isomorphism";
    pub const MINIMAL: &str = "minimal-model";
    pub const TORSION: &str = "torsion-at-infinity";
    pub const DERIVED: &str = "artifact-derived";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub claim: &'static str,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<Value>,
}

impl Check {
    /// Passes iff `expected == computed`.
    pub fn equal(name: impl Into<String>, claim: &'static str, expected: impl Serialize, computed: impl Serialize) -> Self {
        let expected = json!(expected);
        let computed = json!(computed);
        let pass = expected == computed;
        Check { name: name.into(), claim, expected, computed, pass, bound: None }
    }

    pub fn with(
        name: impl Into<String>,
        claim: &'static str,
        expected: impl Serialize,
        computed: impl Serialize,
        pass: bool,
    ) -> Self {
        Check { name: name.into(), claim, expected: json!(expected), computed: json!(computed), pass, bound: None }
    }

    pub fn bound(mut self, bound: Value) -> Self {
        self.bound = Some(bound);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub version: &'static str,
    pub config: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Envelope {
    pub fn new(config: Value, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Envelope { version: VERSION, config, checks, pass }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["name", "claim", "expected", "computed", "pass", "bound"])?;
                for c in &self.checks {
                    let bound = c.bound.as_ref().map(Value::to_string).unwrap_or_default();
                    w.write_record([
                        c.name.as_str(),
                        c.claim,
                        &c.expected.to_string(),
                        &c.computed.to_string(),
                        if c.pass { "true" } else { "false" },
                        &bound,
                    ])?;
                }
                Ok(String::from_utf8(w.into_inner()?)?)
            }
            Format::Text => {
                let mut out = String::new();
                writeln!(out, "kummer-mw {} {}", self.version, compact(&self.config))?;
                for c in &self.checks {
                    let status = if c.pass { "PASS" } else { "FAIL" };
                    write!(out, "{status}  {} [{}]: {}", c.name, c.claim, compact(&c.computed))?;
                    if !c.pass {
                        write!(out, " (expected {})", compact(&c.expected))?;
                    }
                    if let Some(b) = &c.bound {
                        write!(out, " bound {}", compact(b))?;
                    }
                    out.push('\n');
                }
                let passed = self.checks.iter().filter(|c| c.pass).count();
                let verdict = if self.pass { "PASS" } else { "FAIL" };
                writeln!(out, "overall: {verdict} ({passed}/{} checks)", self.checks.len())?;
                Ok(out)
            }
        }
    }
}

/// One-line rendering: strings unquoted, everything else as compact JSON.
fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
