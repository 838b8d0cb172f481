//! Named check suites shared by the command-line front end and the acceptance tests.
//!
//! Each suite returns [`Check`]s: an observed value compared against a limit,
//! or a reported value with no assertion.

mod calibrated;
mod completion;
mod identities;
mod statistics;

pub use calibrated::*;
pub use completion::*;
pub use identities::*;
pub use statistics::*;

use serde::Serialize;

/// How an observation is compared with its limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
    Report,
}

/// One verified (or reported) quantity.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// The bound or identity being tested.
    pub reference: String,
    pub observed: f64,
    pub limit: Option<f64>,
    pub relation: Relation,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn at_most(name: impl Into<String>, reference: impl Into<String>, observed: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            reference: reference.into(),
            observed,
            limit: Some(limit),
            relation: Relation::AtMost,
            passed: observed <= limit,
            detail: String::new(),
        }
    }

    pub fn at_least(name: impl Into<String>, reference: impl Into<String>, observed: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            reference: reference.into(),
            observed,
            limit: Some(limit),
            relation: Relation::AtLeast,
            passed: observed >= limit,
            detail: String::new(),
        }
    }

    pub fn report(name: impl Into<String>, reference: impl Into<String>, observed: f64) -> Self {
        Self {
            name: name.into(),
            reference: reference.into(),
            observed,
            limit: None,
            relation: Relation::Report,
            passed: true,
            detail: String::new(),
        }
    }

    /// A boolean condition, recorded as 1 (holds) or 0.
    pub fn holds(name: impl Into<String>, reference: impl Into<String>, ok: bool) -> Self {
        Self::at_least(name, reference, if ok { 1.0 } else { 0.0 }, 1.0)
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    /// One-line summary.
    pub fn line(&self) -> String {
        let status = match (self.relation, self.passed) {
            (Relation::Report, _) => "REPORT",
            (_, true) => "PASS",
            (_, false) => "FAIL",
        };
        let cmp = match (self.relation, self.limit) {
            (Relation::AtMost, Some(l)) => format!(" <= {l:e}"),
            (Relation::AtLeast, Some(l)) => format!(" >= {l:e}"),
            _ => String::new(),
        };
        let detail = if self.detail.is_empty() {
            String::new()
        } else {
            format!(" ({})", self.detail)
        };
        format!(
            "[{status}] {}: {:e}{cmp} [{}]{detail}",
            self.name, self.observed, self.reference
        )
    }
}

/// A named group of checks.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: std::collections::BTreeMap<String, String>,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            params: Default::default(),
            checks: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Largest absolute deviation in a sequence of pairs.
pub(crate) fn max_deviation<I>(pairs: I) -> f64
where
    I: IntoIterator<Item = (num_complex::Complex64, num_complex::Complex64)>,
{
    pairs.into_iter().map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}
