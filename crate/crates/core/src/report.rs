//! Structured pass/fail reports shared by validators, suites and the CLI.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Value::is_null", default)]
    pub detail: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool, detail: Value) {
        self.checks.push(Check { name: name.into(), seed: None, pass, detail });
    }

    pub fn push_seeded(&mut self, name: impl Into<String>, seed: u64, pass: bool, detail: Value) {
        self.checks.push(Check { name: name.into(), seed: Some(seed), pass, detail });
    }

    /// Appends every check of `other`, stamping `seed` on those without one.
    pub fn absorb(&mut self, other: Report, seed: Option<u64>) {
        for mut c in other.checks {
            if c.seed.is_none() {
                c.seed = seed;
            }
            self.checks.push(c);
        }
    }

    /// Appends `other` with its check names prefixed by `prefix.`.
    pub fn absorb_prefixed(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Orders checks by (seed, name) so reports merged from parallel workers
    /// are independent of scheduling.
    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| (a.seed, &a.name).cmp(&(b.seed, &b.name)));
    }

    pub fn summary(&self) -> Value {
        json!({ "pass": self.passed(), "fail": self.failed() })
    }

    pub fn to_json(&self) -> Value {
        json!({ "checks": self.checks, "summary": self.summary() })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} passed, {} failed", self.passed(), self.failed())?;
        if let Some(c) = self.first_failure() {
            write!(f, "; first failure `{}`", c.name)?;
            if !c.detail.is_null() {
                write!(f, ": {}", c.detail)?;
            }
        }
        Ok(())
    }
}

/// Outcome of a decision procedure that may be inconclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
