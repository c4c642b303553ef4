//! Browser bindings for three small views of `dkg-core`: admissible-region
//! threshold curves, cone-integral profiles and a short coupled evolution.
//!
//! Each export returns a JSON string; the plain `*_json` functions do the
//! work so they can be tested natively.

use dkg_core::harness::cone::{
    cone_delta_integral, fit_exponents, log_spaced, reference_case, ConeBranch, ConeIntegralSpec, ConeRegion,
};
use dkg_core::harness::region::{admissible_region, in_r2_region, parse_decimal, thresholds, to_f64, RegionQuery, RegionVariant, Q};
use dkg_core::solver::{charge, evolve, reassemble, split_data, InitialData, PhysicsParams, SolverConfig};
use dkg_core::GridSpec;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest grid the evolution view accepts, to keep the page responsive.
pub const MAX_DEMO_N: usize = 64;
pub const MAX_DEMO_STEPS: usize = 2000;

fn variant(name: &str) -> Result<RegionVariant, String> {
    RegionVariant::BOTH
        .into_iter()
        .find(|v| v.name() == name)
        .ok_or_else(|| format!("unknown variant {name:?}"))
}

/// Threshold curves `(s₀(r), l₀(r))` for both variants on `samples` points of
/// `(1, 2]`, plus the exact pair `(s₀ + δ, l₀ + δ)` at the chosen `r`.
pub fn region_json(r: &str, delta: &str, variant_name: &str, samples: usize) -> Result<String, String> {
    let rq = parse_decimal(r).map_err(|e| e.to_string())?;
    let dq = parse_decimal(delta).map_err(|e| e.to_string())?;
    let v = variant(variant_name)?;
    let (s, l) = admissible_region(&RegionQuery { r: rq, delta: dq, variant: v }).map_err(|e| e.to_string())?;
    let n = samples.clamp(2, 1000) as i64;
    let curves: Vec<_> = RegionVariant::BOTH
        .into_iter()
        .map(|var| {
            // r = 1 + k/n, k = 1..=n, kept exact.
            let pts: Vec<[f64; 3]> = (1..=n)
                .map(|k| {
                    let rr = Q::new(n + k, n);
                    let (s0, l0) = thresholds(rr, var);
                    [to_f64(rr), to_f64(s0), to_f64(l0)]
                })
                .collect();
            json!({ "variant": var.name(), "points": pts })
        })
        .collect();
    Ok(json!({
        "pair": { "s": s.to_string(), "l": l.to_string(), "s_f64": to_f64(s), "l_f64": to_f64(l) },
        "r2_region": (rq == Q::from_integer(2)).then(|| in_r2_region(s, l)),
        "curves": curves,
    })
    .to_string())
}

/// The reference-weighted cone integral against `|ξ|` at a fixed relative
/// gap, together with the fitted exponents and their expected values.
pub fn cone_json(branch_name: &str, r: f64, rel_gap: f64) -> Result<String, String> {
    let branch = match branch_name {
        "difference" => ConeBranch::Difference,
        "sum" => ConeBranch::Sum,
        other => return Err(format!("unknown branch {other:?}")),
    };
    if !(r > 1.0 && r <= 2.0) {
        return Err(format!("r must lie in (1, 2], got {r}"));
    }
    if !(rel_gap > 0.0 && rel_gap < 0.5) {
        return Err(format!("relative gap must lie in (0, 0.5), got {rel_gap}"));
    }
    let ((a1, a2), (ea, eb)) = reference_case(branch, r);
    let region = match branch {
        ConeBranch::Difference => ConeRegion::Inner,
        ConeBranch::Sum => ConeRegion::All,
    };
    let mut profile = Vec::new();
    for k in log_spaced(1.0, 100.0, 24) {
        let tau = match branch {
            ConeBranch::Difference => k * (1.0 - rel_gap),
            ConeBranch::Sum => k * (1.0 + rel_gap),
        };
        let v = cone_delta_integral(&ConeIntegralSpec { tau, xi: [k, 0.0], a1, a2, branch, region })
            .map_err(|e| e.to_string())?;
        profile.push([k, v.value]);
    }
    let fit = fit_exponents(branch, region, a1, a2, &log_spaced(1.0, 100.0, 5), &log_spaced(1e-8, 1e-5, 4))
        .map_err(|e| e.to_string())?;
    Ok(json!({
        "weights": [a1, a2],
        "profile": profile,
        "fit": { "a": fit.a, "b": fit.b },
        "expected": { "a": ea, "b": eb },
    })
    .to_string())
}

/// Gaussian data of amplitude `amp` evolved with coupling `coupling`: the
/// charge per step and the final density `|ψ|²` on the `n × n` grid.
pub fn evolve_json(n: usize, amp: f64, dt: f64, steps: usize, coupling: f64) -> Result<String, String> {
    if !(4..=MAX_DEMO_N).contains(&n) {
        return Err(format!("n must lie in [4, {MAX_DEMO_N}]"));
    }
    if steps > MAX_DEMO_STEPS {
        return Err(format!("at most {MAX_DEMO_STEPS} steps"));
    }
    let grid = GridSpec::spatial(n, 16.0).map_err(|e| e.to_string())?;
    let data = InitialData::Gaussian { psi: [amp, 0.6 * amp], phi: amp, dt_phi: 0.0, width: 1.5 };
    let (psi, phi, dphi) = data.build(grid, 0).map_err(|e| e.to_string())?;
    let state = split_data(&psi, &phi, &dphi).map_err(|e| e.to_string())?;
    let physics = PhysicsParams { dirac_mass: 1.0, kg_mass: 1.0, coupling };
    let traj = evolve(&state, &physics, &SolverConfig::stepping(dt, steps), 1).map_err(|e| e.to_string())?;
    let series: Vec<[f64; 2]> = traj
        .states
        .iter()
        .map(|s| Ok([s.time, charge(&s.psi_plus, &s.psi_minus)?]))
        .collect::<dkg_core::Result<_>>()
        .map_err(|e| e.to_string())?;
    let last = reassemble(traj.last().expect("initial state")).map_err(|e| e.to_string())?;
    let density: Vec<f64> = (0..grid.len())
        .map(|i| last.psi.value(i).iter().map(|z| z.norm_sqr()).sum())
        .collect();
    Ok(json!({ "n": n, "charge": series, "density": density }).to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn region(r: &str, delta: &str, variant: &str, samples: usize) -> Result<String, JsValue> {
    js(region_json(r, delta, variant, samples))
}

#[wasm_bindgen]
pub fn cone_profile(branch: &str, r: f64, rel_gap: f64) -> Result<String, JsValue> {
    js(cone_json(branch, r, rel_gap))
}

#[wasm_bindgen]
pub fn evolve_gaussian(n: usize, amp: f64, dt: f64, steps: usize, coupling: f64) -> Result<String, JsValue> {
    js(evolve_json(n, amp, dt, steps, coupling))
}
