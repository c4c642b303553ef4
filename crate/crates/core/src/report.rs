//! Report records shared by the harness, the norms module and the CLI.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::spectral_grid::GridSpec;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    /// Resolution (`n_x`) or sample count the constant was measured at.
    pub at: usize,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub max_ratio: f64,
    pub min_ratio: f64,
    #[serde(default)]
    pub trend: Vec<TrendPoint>,
}

/// Outcome of one estimate run: empirical constants plus enough metadata to
/// reproduce it.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub operation: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
    pub count: usize,
    pub grid: Option<GridSpec>,
    pub epsilon: f64,
    pub constants: Constants,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rhs: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub passed: Option<bool>,
}

impl EstimateReport {
    pub fn new(operation: &str, seed: u64) -> Self {
        Self {
            operation: operation.to_string(),
            seed,
            constants: Constants {
                max_ratio: 0.0,
                min_ratio: f64::INFINITY,
                trend: Vec::new(),
            },
            ..Default::default()
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Sets `lhs`, `rhs` and the ratio constants from a single comparison.
    pub fn set_single(&mut self, lhs: f64, rhs: f64) {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
        self.constants.max_ratio = ratio;
        self.constants.min_ratio = ratio;
        self.count = self.count.max(1);
    }

    /// `lhs / rhs` when `rhs > 0`.
    pub fn ratio(&self) -> Option<f64> {
        match (self.lhs, self.rhs) {
            (Some(l), Some(r)) if r > 0.0 => Some(l / r),
            _ => None,
        }
    }

    pub fn absorb(&mut self, tracker: &RatioTracker) {
        self.constants.max_ratio = tracker.max;
        self.constants.min_ratio = tracker.min;
        self.count = tracker.count;
        self.skipped = tracker.skipped;
        self.constants.trend = tracker
            .checkpoints
            .iter()
            .map(|&(at, max_ratio)| TrendPoint { at, max_ratio })
            .collect();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Running max/min of sample ratios, with the running max recorded whenever
/// the sample count reaches a power of two.
#[derive(Clone, Debug)]
pub struct RatioTracker {
    pub max: f64,
    pub min: f64,
    pub count: usize,
    pub skipped: usize,
    pub checkpoints: Vec<(usize, f64)>,
}

impl Default for RatioTracker {
    fn default() -> Self {
        Self {
            max: 0.0,
            min: f64::INFINITY,
            count: 0,
            skipped: 0,
            checkpoints: Vec::new(),
        }
    }
}

impl RatioTracker {
    pub fn push(&mut self, ratio: f64) {
        self.max = self.max.max(ratio);
        self.min = self.min.min(ratio);
        self.count += 1;
        if self.count.is_power_of_two() {
            self.checkpoints.push((self.count, self.max));
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    /// Relative growth of the running max over the last doubling of samples.
    pub fn last_doubling_change(&self) -> Option<f64> {
        let n = self.checkpoints.len();
        if n < 2 {
            return None;
        }
        let (a, b) = (self.checkpoints[n - 2].1, self.checkpoints[n - 1].1);
        Some(if a > 0.0 { (b - a) / a } else { 0.0 })
    }

    pub fn merge(&mut self, other: &RatioTracker) {
        self.max = self.max.max(other.max);
        self.min = self.min.min(other.min);
        self.count += other.count;
        self.skipped += other.skipped;
    }
}
