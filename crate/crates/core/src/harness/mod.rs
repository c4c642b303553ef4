//! Numerical checks of the angle, null-form, bilinear and product estimates,
//! cone delta-integrals, scaling exponents and admissible regions.
//!
//! Every check returns an [`EstimateReport`](crate::report::EstimateReport)
//! holding the empirical constants and the seed that reproduces them.

pub mod angles;
pub mod bilinear;
pub mod cone;
pub mod nullform;
pub mod product;
pub mod region;
pub mod sampling;
pub mod scaling;
pub mod transfer;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default `ε` realising the "+" in exponents such as `b = 1/r+`.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Share of skipped samples above which a report carries a warning.
pub const SKIP_WARNING_FRACTION: f64 = 0.01;

/// Frequency sampling: `count` draws with `|η|, |ξ|, |τ|, |λ|` in
/// `[range_min, range_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub count: usize,
    pub range_min: f64,
    pub range_max: f64,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(count: usize, seed: u64) -> Self {
        Self {
            count,
            range_min: 1e-2,
            range_max: 1e3,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Parameter("sample count must be at least 1".into()));
        }
        if !(self.range_min > 0.0 && self.range_max > self.range_min && self.range_max.is_finite()) {
            return Err(Error::Parameter(format!(
                "sample range must satisfy 0 < min < max, got [{}, {}]",
                self.range_min, self.range_max
            )));
        }
        Ok(())
    }
}
