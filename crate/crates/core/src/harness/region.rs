//! Admissible data regularities `(s, l)` as exact rationals.
//!
//! Two families of thresholds `(s₀(r), l₀(r))`:
//!
//! ```text
//! minimal s: (33/(20r) − 41/40, 9/(5r) − 11/20)
//! minimal l: (5/(4r) − 5/8,     2/r − 3/4)
//! ```
//!
//! and, for `r = 2`, the region
//! `s > −1/5`, `max(1/4 − s/2, 1/4 + s/2, s) < l < min(3/4 + 2s, 3/4 + 3s/2, 1 + s)`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

fn q(n: i64, d: i64) -> Q {
    Ratio::new(n, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionVariant {
    MinimalS,
    MinimalL,
}

impl RegionVariant {
    pub const BOTH: [RegionVariant; 2] = [RegionVariant::MinimalS, RegionVariant::MinimalL];

    pub fn name(self) -> &'static str {
        match self {
            RegionVariant::MinimalS => "minimal_s",
            RegionVariant::MinimalL => "minimal_l",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegionQuery {
    pub r: Q,
    pub delta: Q,
    pub variant: RegionVariant,
}

/// Threshold pair `(s₀, l₀)` at any positive `r`, without range checks (so
/// the `r → 1` endpoint can be evaluated directly).
pub fn thresholds(r: Q, variant: RegionVariant) -> (Q, Q) {
    let inv = r.recip();
    match variant {
        RegionVariant::MinimalS => (q(33, 20) * inv - q(41, 40), q(9, 5) * inv - q(11, 20)),
        RegionVariant::MinimalL => (q(5, 4) * inv - q(5, 8), q(2, 1) * inv - q(3, 4)),
    }
}

/// `(s₀ + δ, l₀ + δ)` for `1 < r ≤ 2`, `δ > 0`.
pub fn admissible_region(query: &RegionQuery) -> Result<(Q, Q)> {
    if !(query.r > q(1, 1) && query.r <= q(2, 1)) {
        return Err(Error::Parameter(format!("r must lie in (1, 2], got {}", query.r)));
    }
    if query.delta <= q(0, 1) {
        return Err(Error::Parameter(format!("delta must be positive, got {}", query.delta)));
    }
    let (s0, l0) = thresholds(query.r, query.variant);
    Ok((s0 + query.delta, l0 + query.delta))
}

/// The `r = 2` region, exactly.
pub fn in_r2_region(s: Q, l: Q) -> bool {
    let half = q(1, 2);
    let quarter = q(1, 4);
    let three_q = q(3, 4);
    let lower = (quarter - s * half).max(quarter + s * half).max(s);
    let upper = (three_q + s * 2).min(three_q + s * q(3, 2)).min(q(1, 1) + s);
    s > q(-1, 5) && lower < l && l < upper
}

/// [`in_r2_region`] for floating-point input.
pub fn in_r2_region_f64(s: f64, l: f64) -> bool {
    let lower = (0.25 - s / 2.0).max(0.25 + s / 2.0).max(s);
    let upper = (0.75 + 2.0 * s).min(0.75 + 1.5 * s).min(1.0 + s);
    s > -0.2 && lower < l && l < upper
}

/// Exact rational value of a decimal literal such as `1.0001` or `-2.5e-3`.
pub fn parse_decimal(text: &str) -> Result<Q> {
    let bad = || Error::Parameter(format!("not a decimal number: {text:?}"));
    let t = text.trim();
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) {
        return Err(bad());
    }
    let all: String = format!("{int}{frac}");
    let num: i64 = all.parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = |k: u32| 10i64.checked_pow(k).ok_or_else(bad);
    let mut value = if scale >= 0 {
        Q::from_integer(num.checked_mul(ten(scale as u32)?).ok_or_else(bad)?)
    } else {
        Ratio::new(num, ten((-scale) as u32)?)
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

pub fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}
