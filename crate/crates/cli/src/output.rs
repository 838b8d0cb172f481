use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use tracefn_core::calibration::Manifest;
use tracefn_core::report::fmt_f64;
use tracefn_core::suites::{Check, Relation, SuiteReport};
use tracefn_core::{Error, Result};

use crate::args::Format;

/// Rows for CSV output.
#[derive(Debug, Default)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Self {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn from_checks(checks: &[Check]) -> Self {
        let mut t = Table::new(&["name", "reference", "observed", "limit", "relation", "passed", "detail"]);
        for c in checks {
            t.push(vec![
                c.name.clone(),
                c.reference.clone(),
                fmt_f64(c.observed),
                c.limit.map(fmt_f64).unwrap_or_default(),
                match c.relation {
                    Relation::AtMost => "at_most",
                    Relation::AtLeast => "at_least",
                    Relation::Report => "report",
                }
                .into(),
                c.passed.to_string(),
                c.detail.clone(),
            ]);
        }
        t
    }
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub json: Value,
    pub table: Table,
    /// Failed assertions, each naming the bound it violates.
    pub failures: Vec<String>,
}

/// One JSON object per run.
#[derive(Debug, Serialize)]
pub struct RunReport<T: Serialize> {
    pub command: &'static str,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub calibration: Vec<CalibrationRef>,
    pub passed: bool,
    pub result: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct CalibrationRef {
    pub suite: String,
    pub threshold: f64,
    pub frozen: f64,
    pub q_grid: Vec<u64>,
}

pub fn calibration_ref(manifest: &Manifest, suite: &str) -> Result<CalibrationRef> {
    let e = manifest.get(suite)?;
    Ok(CalibrationRef {
        suite: e.suite.clone(),
        threshold: e.threshold,
        frozen: e.frozen,
        q_grid: e.q_grid.clone(),
    })
}

pub fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Format(format!("serialization: {e}")))
}

pub fn failures(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} violates {}: {}", c.name, c.reference, c.line()))
        .collect()
}

/// Outcome of a run whose result is a suite report.
pub fn suite_outcome(
    command: &'static str,
    params: BTreeMap<String, String>,
    seed: u64,
    calibration: Vec<CalibrationRef>,
    suite: &SuiteReport,
) -> Result<Outcome> {
    let report = RunReport {
        command,
        params,
        seed,
        calibration,
        passed: suite.passed(),
        result: suite,
    };
    Ok(Outcome {
        json: to_value(&report)?,
        table: Table::from_checks(&suite.checks),
        failures: failures(&suite.checks),
    })
}

pub fn write<W: Write>(outcome: &Outcome, format: Format, mut w: W) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &outcome.json)
                .map_err(|e| Error::Format(format!("serialization: {e}")))?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut cw = csv::Writer::from_writer(&mut w);
            let csv_err = |e: csv::Error| Error::Format(format!("csv: {e}"));
            cw.write_record(&outcome.table.headers).map_err(csv_err)?;
            for row in &outcome.table.rows {
                cw.write_record(row).map_err(csv_err)?;
            }
            cw.flush()?;
        }
    }
    Ok(())
}
