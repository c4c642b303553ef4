//! Angle equivalences
//!
//! ```text
//! ∠(η, η−ξ) ~ |ξ|^{1/2}(|ξ| − ||η|−|η−ξ||)^{1/2} / (|η|^{1/2}|η−ξ|^{1/2})          (A)
//! ∠(η, ξ−η) ~ (|η|+|ξ−η|)^{1/2}(|η|+|η−ξ|−|ξ|)^{1/2} / (|η|^{1/2}|η−ξ|^{1/2})     (B)
//! ```
//!
//! and the modulation bound
//!
//! ```text
//! ∠(±₁η, ±₂(η−ξ)) ≲ ((⟨|τ|−|ξ|⟩ + ⟨λ ±₁ |η|⟩ + ⟨λ−τ ±₂ |η−ξ|⟩) / min(⟨·⟩, ⟨η−ξ⟩))^{1/2}  (C)
//! ```
//!
//! where the first entry of the minimum is `⟨ξ⟩` as printed, or `⟨η⟩`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{SampleConfig, SKIP_WARNING_FRACTION};
use crate::dirac_algebra::{Sign, SignPair};
use crate::error::Result;
use crate::report::{EstimateReport, RatioTracker};
use crate::rng::{log_uniform, seeded, vector_in_shell};
use crate::spectral_grid::japanese;

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

fn dot(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[0] + u[1] * v[1]
}

fn cross(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Angle via `atan2(|u×v|, u·v)`; agrees with the arccos form but keeps full
/// relative accuracy for nearly (anti)parallel vectors.
pub fn angle_accurate(u: [f64; 2], v: [f64; 2]) -> f64 {
    cross(u, v).abs().atan2(dot(u, v))
}

/// `|u||v| − u·v ≥ 0` without cancellation.
fn gap_same_direction(u: [f64; 2], v: [f64; 2]) -> f64 {
    let nn = norm(u) * norm(v);
    let d = dot(u, v);
    if d <= 0.0 {
        nn - d
    } else {
        cross(u, v).powi(2) / (nn + d)
    }
}

/// Right side of (A).
pub fn rhs_a(eta: [f64; 2], xi: [f64; 2]) -> f64 {
    let w = [eta[0] - xi[0], eta[1] - xi[1]];
    let (ne, nw, nx) = (norm(eta), norm(w), norm(xi));
    // |ξ| − ||η|−|η−ξ|| = 2(|η||η−ξ| − η·(η−ξ)) / (|ξ| + ||η|−|η−ξ||)
    let d = (ne - nw).abs();
    let defect = 2.0 * gap_same_direction(eta, w) / (nx + d);
    (nx * defect).sqrt() / (ne * nw).sqrt()
}

/// Right side of (B).
pub fn rhs_b(eta: [f64; 2], xi: [f64; 2]) -> f64 {
    let v = [xi[0] - eta[0], xi[1] - eta[1]];
    let (ne, nv, nx) = (norm(eta), norm(v), norm(xi));
    // |η| + |ξ−η| − |ξ| = 2(|η||ξ−η| − η·(ξ−η)) / (|η| + |ξ−η| + |ξ|)
    let defect = 2.0 * gap_same_direction(eta, v) / (ne + nv + nx);
    ((ne + nv) * defect).sqrt() / (ne * nv).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound16Denominator {
    /// `min(⟨ξ⟩, ⟨η−ξ⟩)`. Not uniform; see [`bound_16_witness`].
    XiLiteral,
    /// `min(⟨η⟩, ⟨η−ξ⟩)`.
    EtaVariant,
}

/// Right side of (C).
pub fn rhs_c(eta: [f64; 2], xi: [f64; 2], tau: f64, lambda: f64, signs: SignPair, den: Bound16Denominator) -> f64 {
    let w = [eta[0] - xi[0], eta[1] - xi[1]];
    let (ne, nw, nx) = (norm(eta), norm(w), norm(xi));
    let num = japanese(tau.abs() - nx)
        + japanese(lambda + signs.s1.value() * ne)
        + japanese(lambda - tau + signs.s2.value() * nw);
    let first = match den {
        Bound16Denominator::XiLiteral => japanese(nx),
        Bound16Denominator::EtaVariant => japanese(ne),
    };
    (num / first.min(japanese(nw))).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    A,
    B,
}

/// Draws `(η, ξ)`; a quarter of the draws put `η−ξ` within a small angle of
/// `±η` to probe the degenerate directions.
fn draw_pair(rng: &mut impl Rng, cfg: &SampleConfig) -> ([f64; 2], [f64; 2]) {
    let eta = vector_in_shell(rng, cfg.range_min, cfg.range_max);
    if rng.random_bool(0.25) {
        let base = eta[1].atan2(eta[0]) + if rng.random_bool(0.5) { 0.0 } else { std::f64::consts::PI };
        let dev = log_uniform(rng, 1e-9, 1.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let r = log_uniform(rng, cfg.range_min, cfg.range_max);
        let w = [r * (base + dev).cos(), r * (base + dev).sin()];
        (eta, [eta[0] - w[0], eta[1] - w[1]])
    } else {
        (eta, vector_in_shell(rng, cfg.range_min, cfg.range_max))
    }
}

fn ratio_for(which: Equivalence, eta: [f64; 2], xi: [f64; 2]) -> Option<f64> {
    let w = [eta[0] - xi[0], eta[1] - xi[1]];
    if norm(eta) == 0.0 || norm(w) == 0.0 || norm(xi) == 0.0 {
        return None;
    }
    let (lhs, rhs) = match which {
        Equivalence::A => (angle_accurate(eta, w), rhs_a(eta, xi)),
        Equivalence::B => (angle_accurate(eta, [-w[0], -w[1]]), rhs_b(eta, xi)),
    };
    if rhs == 0.0 || !rhs.is_finite() {
        return None;
    }
    Some(lhs / rhs)
}

/// Ratio `LHS/RHS` of (A) or (B) at one point, `None` when degenerate.
pub fn equivalence_ratio(which: Equivalence, eta: [f64; 2], xi: [f64; 2]) -> Option<f64> {
    ratio_for(which, eta, xi)
}

fn finish(mut report: EstimateReport, tracker: &RatioTracker) -> EstimateReport {
    report.absorb(tracker);
    let total = tracker.count + tracker.skipped;
    if total > 0 && tracker.skipped as f64 > SKIP_WARNING_FRACTION * total as f64 {
        report.note(format!(
            "warning: {} of {} samples skipped as degenerate",
            tracker.skipped, total
        ));
    }
    if let Some(change) = tracker.last_doubling_change() {
        report.parameters.insert("last_doubling_change".into(), change.into());
    }
    report
}

/// Min and max of `LHS/RHS` for (A) (`which = A`) or (B) over `cfg.count`
/// samples.
pub fn verify_angle_equivalence(which: Equivalence, cfg: &SampleConfig) -> Result<EstimateReport> {
    cfg.validate()?;
    let mut rng = seeded(cfg.seed);
    let mut tracker = RatioTracker::default();
    for _ in 0..cfg.count {
        let (eta, xi) = draw_pair(&mut rng, cfg);
        match ratio_for(which, eta, xi) {
            Some(q) => tracker.push(q),
            None => tracker.skip(),
        }
    }
    let op = match which {
        Equivalence::A => "angle14",
        Equivalence::B => "angle15",
    };
    let report = EstimateReport::new(op, cfg.seed)
        .param("range_min", cfg.range_min)
        .param("range_max", cfg.range_max);
    Ok(finish(report, &tracker))
}

/// Both equivalences; returns `(A, B)` reports.
pub fn verify_angle_equivalences(cfg: &SampleConfig) -> Result<(EstimateReport, EstimateReport)> {
    Ok((
        verify_angle_equivalence(Equivalence::A, cfg)?,
        verify_angle_equivalence(Equivalence::B, cfg)?,
    ))
}

fn signed_offset(rng: &mut impl Rng, max: f64) -> f64 {
    let mag = log_uniform(rng, 1e-3, max);
    if rng.random_bool(0.5) {
        mag
    } else {
        -mag
    }
}

/// Draws `(η, ξ, τ, λ)`: half of the draws put both input modulations near
/// their cones (offsets log-uniform down to `1e−3`), half are uniform.
fn draw_modulated(rng: &mut impl Rng, cfg: &SampleConfig, signs: SignPair) -> ([f64; 2], [f64; 2], f64, f64) {
    let eta = vector_in_shell(rng, cfg.range_min, cfg.range_max);
    let xi = vector_in_shell(rng, cfg.range_min, cfg.range_max);
    let nw = norm([eta[0] - xi[0], eta[1] - xi[1]]);
    let m = cfg.range_max;
    if rng.random_bool(0.5) {
        let lambda = -signs.s1.value() * norm(eta) + signed_offset(rng, m);
        let tau = lambda + signs.s2.value() * nw + signed_offset(rng, m);
        (eta, xi, tau, lambda)
    } else {
        let tau = rng.random_range(-m..m);
        let lambda = rng.random_range(-m..m);
        (eta, xi, tau, lambda)
    }
}

/// Sup of `LHS/RHS` of (C) over samples and all four sign pairs.
pub fn verify_angle_bound_16(cfg: &SampleConfig, den: Bound16Denominator) -> Result<EstimateReport> {
    cfg.validate()?;
    let mut rng = seeded(cfg.seed);
    let mut tracker = RatioTracker::default();
    for n in 0..cfg.count {
        let signs = SignPair::ALL[n % 4];
        let (eta, xi, tau, lambda) = draw_modulated(&mut rng, cfg, signs);
        let w = [eta[0] - xi[0], eta[1] - xi[1]];
        if norm(w) == 0.0 {
            tracker.skip();
            continue;
        }
        let a = signs.s1.value();
        let b = signs.s2.value();
        let lhs = angle_accurate([a * eta[0], a * eta[1]], [b * w[0], b * w[1]]);
        tracker.push(lhs / rhs_c(eta, xi, tau, lambda, signs, den));
    }
    let report = EstimateReport::new("angle16", cfg.seed)
        .param("range_min", cfg.range_min)
        .param("range_max", cfg.range_max)
        .param(
            "denominator",
            match den {
                Bound16Denominator::XiLiteral => "min(<xi>,<eta-xi>)",
                Bound16Denominator::EtaVariant => "min(<eta>,<eta-xi>)",
            },
        );
    Ok(finish(report, &tracker))
}

/// A family on which the printed form is unbounded: `η = (0, 1)`,
/// `ξ = (N, 0)`, signs `(+,+)`, both input modulations zero. The angle stays
/// near `π/2` while the right side decays like `N^{−1/2}`.
pub fn bound_16_witness(xi_len: f64, den: Bound16Denominator) -> f64 {
    let eta = [0.0, 1.0];
    let xi = [xi_len, 0.0];
    let signs = SignPair::new(Sign::Plus, Sign::Plus);
    let w = [eta[0] - xi[0], eta[1] - xi[1]];
    let lambda = -1.0;
    let tau = lambda + norm(w);
    angle_accurate(eta, w) / rhs_c(eta, xi, tau, lambda, signs, den)
}
