//! Frozen thresholds for the ratio tests.
//!
//! Each entry records the declared calibration grid, the largest statistic
//! observed on it, the frozen value `2 × observed`, and the threshold the
//! assertions use.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Factor between the observed maximum and the frozen value.
pub const FREEZE_FACTOR: f64 = 2.0;

const BUNDLED: &str = include_str!("../calibration/manifest.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationEntry {
    pub suite: String,
    pub family: String,
    /// What the statistic measures.
    pub statistic: String,
    pub q_grid: Vec<u64>,
    pub observed_max: f64,
    pub frozen: f64,
    /// Value the assertions compare against.
    pub threshold: f64,
}

impl CalibrationEntry {
    /// True when the frozen value does not exceed the asserted threshold.
    pub fn frozen_within_threshold(&self) -> bool {
        self.frozen <= self.threshold
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub seed: u64,
    pub entries: Vec<CalibrationEntry>,
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("calibration manifest: {e}")))
    }

    /// The manifest checked into the repository.
    pub fn bundled() -> &'static Manifest {
        static CELL: OnceLock<Manifest> = OnceLock::new();
        CELL.get_or_init(|| Manifest::from_json(BUNDLED).expect("bundled manifest is valid"))
    }

    pub fn get(&self, suite: &str) -> Result<&CalibrationEntry> {
        self.entries
            .iter()
            .find(|e| e.suite == suite)
            .ok_or_else(|| Error::InvalidArgument(format!("no calibration entry for suite {suite}")))
    }

    pub fn threshold(&self, suite: &str) -> Result<f64> {
        self.get(suite).map(|e| e.threshold)
    }

    /// Replace the entry with the same suite name, or append it.
    pub fn upsert(&mut self, entry: CalibrationEntry) {
        match self.entries.iter_mut().find(|e| e.suite == entry.suite) {
            Some(slot) => *slot = entry,
            None => self.entries.push(entry),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        crate::report::to_json(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_manifest_parses_and_is_consistent() {
        let m = Manifest::bundled();
        assert!(!m.entries.is_empty());
        for e in &m.entries {
            assert!(!e.q_grid.is_empty(), "{}", e.suite);
            assert!((e.frozen - FREEZE_FACTOR * e.observed_max).abs() <= 1e-12 * e.frozen.max(1.0));
        }
    }

    #[test]
    fn upsert_replaces_by_suite() {
        let mut m = Manifest {
            version: 1,
            seed: 0,
            entries: vec![],
        };
        let e = CalibrationEntry {
            suite: "x".into(),
            family: "kl2".into(),
            statistic: "s".into(),
            q_grid: vec![5],
            observed_max: 1.0,
            frozen: 2.0,
            threshold: 3.0,
        };
        m.upsert(e.clone());
        m.upsert(CalibrationEntry { threshold: 4.0, ..e });
        assert_eq!(m.entries.len(), 1);
        assert_eq!(m.threshold("x").unwrap(), 4.0);
        assert!(m.get("y").is_err());
    }
}
