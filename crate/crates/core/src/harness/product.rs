//! Scalar product estimates `‖uv‖ ≲ ‖u‖ ‖v‖` in `X^r_{s,b}` spaces: hypothesis
//! validators and the random-field ratio protocol.
//!
//! Instances:
//!
//! * `Zero`: `‖uv‖_{X^r_{0,0}} ≲ ‖u‖_{X^r_{α₁,b₁}} ‖v‖_{X^r_{α₂,b₂}}` for
//!   `α₁,α₂ ≥ 0`, `α₁+α₂ > 3/(2r)`, `b₁+b₂ > 3/(2r)`, `b₁,b₂ > 1/(2r)`.
//! * `General`: `‖uv‖_{X^r_{α₀,γ}} ≲ ‖u‖_{X^r_{α₁,b}} ‖v‖_{X^r_{α₂,b}}` under the
//!   hypothesis list in [`violations`].

use serde::{Deserialize, Serialize};

use super::bilinear::ProtocolConfig;
use super::sampling::{gaussian, product, shape};
use crate::error::{Error, Result};
use crate::norms::{xsb_norm, Branch, NormSpec};
use crate::report::{EstimateReport, RatioTracker, TrendPoint};
use crate::rng::substream;
use crate::spectral_grid::ScalarField;

const SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ProductInstance {
    Zero { alpha1: f64, alpha2: f64, b1: f64, b2: f64 },
    General { gamma: f64, alpha0: f64, alpha1: f64, alpha2: f64, b: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductWhich {
    ZeroShift,
    Weighted,
    Reductions,
}

/// Every failed hypothesis of `inst` at exponent `r`.
pub fn violations(r: f64, inst: &ProductInstance) -> Vec<String> {
    // Non-strict inequalities allow rounding slack, since instances are
    // often built so that they hold with equality.
    let ge = |a: f64, b: f64| a >= b - SLACK;
    let mut out = Vec::new();
    let mut need = |ok: bool, what: &str| {
        if !ok {
            out.push(what.to_string());
        }
    };
    match *inst {
        ProductInstance::Zero { alpha1, alpha2, b1, b2 } => {
            need((1.0..=2.0).contains(&r), "1 ≤ r ≤ 2");
            need(ge(alpha1, 0.0) && ge(alpha2, 0.0), "α₁, α₂ ≥ 0");
            need(alpha1 + alpha2 > 1.5 / r, "α₁ + α₂ > 3/(2r)");
            need(b1 + b2 > 1.5 / r, "b₁ + b₂ > 3/(2r)");
            need(b1 > 0.5 / r && b2 > 0.5 / r, "b₁, b₂ > 1/(2r)");
        }
        ProductInstance::General { gamma, alpha0, alpha1, alpha2, b } => {
            let ir = 1.0 / r;
            need(r > 1.0 && r <= 2.0, "1 < r ≤ 2");
            need(alpha0 > ir - gamma, "α₀ > 1/r − γ");
            need(alpha1 + alpha2 > 2.0 * ir, "α₁ + α₂ > 2/r");
            need(ge(alpha0, 0.0) && ge(alpha1, alpha0) && ge(alpha2, alpha0), "0 ≤ α₀ ≤ α₁, α₂");
            need((alpha1.max(alpha2) - 1.5 * ir).abs() > SLACK, "max(α₁, α₂) ≠ 3/(2r)");
            need(ge(b, gamma), "b ≥ γ");
            let excess = alpha1 + alpha2 - alpha0;
            need(
                (excess > gamma + ir && ge(gamma, 0.5 * ir)) || (ge(excess, gamma + ir) && gamma > 0.5 * ir),
                "α₁ + α₂ − α₀ > γ + 1/r with γ ≥ 1/(2r), or ≥ with γ > 1/(2r)",
            );
            need(ge(gamma, (alpha1 - ir).max(alpha2 - ir)), "γ ≥ max(α₁ − 1/r, α₂ − 1/r)");
            need(b > ir, "b > 1/r");
        }
    }
    out
}

/// Pure validator mode.
pub fn is_valid(r: f64, inst: &ProductInstance) -> bool {
    violations(r, inst).is_empty()
}

/// A named step of the duality reduction and the product instances it uses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub label: String,
    pub instances: Vec<ProductInstance>,
}

/// Instances behind the six dual estimates at `(s, l, b)`.
pub fn reduction_steps(r: f64, s: f64, l: f64, b: f64, eps: f64) -> Vec<ReductionStep> {
    let h = 0.5 / r;
    let step = |label: &str, instances: Vec<ProductInstance>| ReductionStep {
        label: label.into(),
        instances,
    };
    // (1)–(4): fractional Leibniz onto the zero-target estimate.
    let leibniz = ProductInstance::Zero { alpha1: h, alpha2: l, b1: b, b2: b - h };
    vec![
        step("1-4", vec![leibniz]),
        step(
            "5a",
            vec![
                ProductInstance::General { gamma: 1.0, alpha0: 0.0, alpha1: h, alpha2: 1.0 + h + eps, b },
                ProductInstance::Zero { alpha1: h, alpha2: 2.0 * h + eps, b1: b, b2: b },
            ],
        ),
        step(
            "5b",
            vec![
                ProductInstance::General { gamma: 1.0, alpha0: 0.0, alpha1: s, alpha2: 1.0 + 2.0 * h - s, b },
                ProductInstance::Zero { alpha1: s, alpha2: 3.0 * h - s + eps, b1: b, b2: b },
            ],
        ),
        step(
            "6",
            vec![ProductInstance::General { gamma: b - 1.0 + h + eps, alpha0: s, alpha1: s + h, alpha2: l, b }],
        ),
    ]
}

/// Violations of the reduction at `(s, l, b)`, labelled by step.
pub fn reduction_violations(r: f64, s: f64, l: f64, b: f64, eps: f64) -> Vec<String> {
    let ir = 1.0 / r;
    let mut out = Vec::new();
    if l <= ir {
        out.push("1-4: l > 1/r".to_string());
    }
    if b <= ir {
        out.push("1-4: b > 1/r".to_string());
    }
    for st in reduction_steps(r, s, l, b, eps) {
        for inst in &st.instances {
            out.extend(violations(r, inst).into_iter().map(|v| format!("{}: {v}", st.label)));
        }
    }
    out
}

fn spaces(r: f64, inst: &ProductInstance) -> (NormSpec, NormSpec, NormSpec) {
    match *inst {
        ProductInstance::Zero { alpha1, alpha2, b1, b2 } => (
            NormSpec::xsb(alpha1, b1, r, Branch::Wave),
            NormSpec::xsb(alpha2, b2, r, Branch::Wave),
            NormSpec::xsb(0.0, 0.0, r, Branch::Wave),
        ),
        ProductInstance::General { gamma, alpha0, alpha1, alpha2, b } => (
            NormSpec::xsb(alpha1, b, r, Branch::Wave),
            NormSpec::xsb(alpha2, b, r, Branch::Wave),
            NormSpec::xsb(alpha0, gamma, r, Branch::Wave),
        ),
    }
}

/// `‖uv‖_target / (‖u‖ ‖v‖)` for Fourier-space scalars.
pub fn product_ratio(r: f64, inst: &ProductInstance, u: &ScalarField, v: &ScalarField) -> Result<f64> {
    let (su, sv, st) = spaces(r, inst);
    let (nu, nv) = (xsb_norm(u, &su)?, xsb_norm(v, &sv)?);
    if nu == 0.0 || nv == 0.0 {
        return Ok(0.0);
    }
    Ok(xsb_norm(&product(u, v)?, &st)? / (nu * nv))
}

fn protocol(r: f64, inst: &ProductInstance, cfg: &ProtocolConfig, stream: u64) -> Result<(RatioTracker, Vec<TrendPoint>)> {
    let (su, sv, st) = spaces(r, inst);
    let mut total = RatioTracker::default();
    let mut trend = Vec::new();
    for &n in &cfg.resolutions {
        let grid = cfg.grid(n)?;
        let mut tracker = RatioTracker::default();
        for i in 0..cfg.samples {
            let mut rng = substream(cfg.seed, (stream << 48) | ((n as u64) << 32) | i as u64);
            let u = shape(&gaussian::<1>(grid, &mut rng), &su)?;
            let v = shape(&gaussian::<1>(grid, &mut rng), &sv)?;
            tracker.push(xsb_norm(&product(&u, &v)?, &st)?);
        }
        trend.push(TrendPoint { at: n, max_ratio: tracker.max });
        total.merge(&tracker);
    }
    Ok((total, trend))
}

/// Validates the instance(s) of `which` and, when valid (or when
/// `cfg.allow_inadmissible`), runs the ratio protocol on each.
///
/// `ZeroShift` and `Weighted` use `instance`; `Reductions` ignores it and uses
/// the steps at `(s, l, b)` from `reduction`.
pub fn product_estimate_check(
    r: f64,
    which: ProductWhich,
    instance: Option<ProductInstance>,
    reduction: Option<(f64, f64, f64, f64)>,
    cfg: &ProtocolConfig,
) -> Result<EstimateReport> {
    cfg.validate()?;
    let (labelled, bad): (Vec<(String, ProductInstance)>, Vec<String>) = match which {
        ProductWhich::ZeroShift | ProductWhich::Weighted => {
            let inst = instance.ok_or_else(|| Error::Parameter("product check needs an instance".into()))?;
            let kind_ok = matches!(
                (which, inst),
                (ProductWhich::ZeroShift, ProductInstance::Zero { .. }) | (ProductWhich::Weighted, ProductInstance::General { .. })
            );
            if !kind_ok {
                return Err(Error::Parameter("instance kind does not match the selected estimate".into()));
            }
            (vec![("instance".into(), inst)], violations(r, &inst))
        }
        ProductWhich::Reductions => {
            let (s, l, b, eps) =
                reduction.ok_or_else(|| Error::Parameter("reduction check needs (s, l, b, epsilon)".into()))?;
            let steps = reduction_steps(r, s, l, b, eps);
            let list = steps
                .iter()
                .flat_map(|st| st.instances.iter().map(move |i| (st.label.clone(), *i)))
                .collect();
            (list, reduction_violations(r, s, l, b, eps))
        }
    };
    let mut report = EstimateReport::new("product", cfg.seed)
        .param("r", r)
        .param("which", serde_json::to_value(which).expect("serializable"))
        .param("violations", bad.clone());
    if !bad.is_empty() {
        if !cfg.allow_inadmissible {
            return Err(Error::Hypothesis { constraint: bad.join("; ") });
        }
        report.note(format!("exploratory run, hypotheses violated: {}", bad.join("; ")));
    }
    let mut total = RatioTracker::default();
    let mut per = serde_json::Map::new();
    let mut trend: Vec<TrendPoint> = Vec::new();
    for (k, (label, inst)) in labelled.iter().enumerate() {
        let (t, tr) = protocol(r, inst, cfg, k as u64)?;
        per.insert(
            format!("{label}#{k}"),
            serde_json::json!({ "instance": inst, "max_ratio": t.max }),
        );
        for p in tr {
            match trend.iter_mut().find(|q| q.at == p.at) {
                Some(q) => q.max_ratio = q.max_ratio.max(p.max_ratio),
                None => trend.push(p),
            }
        }
        total.merge(&t);
    }
    report.parameters.insert("instances".into(), serde_json::Value::Object(per));
    report.absorb(&total);
    report.constants.trend = trend;
    report.passed = Some(bad.is_empty());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_validator_examples() {
        let r = 2.0;
        let ok = ProductInstance::Zero { alpha1: 0.4, alpha2: 0.4, b1: 0.4, b2: 0.4 };
        assert!(is_valid(r, &ok), "{:?}", violations(r, &ok));
        let r = 1.01;
        let a = 1.5 / r * 0.3;
        let bad = ProductInstance::Zero { alpha1: a, alpha2: a, b1: 0.8, b2: 0.8 };
        assert_eq!(violations(r, &bad), vec!["α₁ + α₂ > 3/(2r)".to_string()]);
        // 0.6 of 3/(2r) each sums to 1.2 · 3/(2r), which passes.
        let a = 1.5 / r * 0.6;
        assert!(is_valid(r, &ProductInstance::Zero { alpha1: a, alpha2: a, b1: 0.8, b2: 0.8 }));
    }

    #[test]
    fn reductions_accept_paper_parameters() {
        let eps = 0.01;
        // Base hypotheses near r = 1 with b = 1/r + ε.
        let r = 1.01;
        let (s, l, b) = (5.0 / (8.0 * r) + eps, 0.5 + 0.75 / r + eps, 1.0 / r + eps);
        assert!(reduction_violations(r, s, l, b, eps).is_empty(), "{:?}", reduction_violations(r, s, l, b, eps));
        let six = &reduction_steps(r, s, l, b, eps)[3].instances[0];
        if let ProductInstance::General { gamma, .. } = six {
            assert!((gamma - (1.5 / r - 1.0 + 2.0 * eps)).abs() < 1e-12);
        }
        assert!(is_valid(r, six));
    }

    #[test]
    fn general_instance_rejects_each_failure() {
        let r = 1.5;
        let good = ProductInstance::General { gamma: 0.6, alpha0: 0.5, alpha1: 0.9, alpha2: 0.95, b: 0.7 };
        assert!(is_valid(r, &good), "{:?}", violations(r, &good));
        let v = violations(r, &ProductInstance::General { gamma: 0.6, alpha0: 0.5, alpha1: 0.9, alpha2: 0.95, b: 0.5 });
        assert!(v.contains(&"b ≥ γ".to_string()) && v.contains(&"b > 1/r".to_string()));
        let v = violations(r, &ProductInstance::General { gamma: 0.6, alpha0: 0.5, alpha1: 1.0, alpha2: 0.95, b: 0.7 });
        assert_eq!(v, vec!["max(α₁, α₂) ≠ 3/(2r)".to_string()]);
    }

    #[test]
    fn protocol_runs_and_rejects_invalid() {
        let cfg = ProtocolConfig::new(2, vec![8, 16], 3);
        let inst = ProductInstance::Zero { alpha1: 0.4, alpha2: 0.4, b1: 0.4, b2: 0.4 };
        let rep = product_estimate_check(2.0, ProductWhich::ZeroShift, Some(inst), None, &cfg).unwrap();
        assert!(rep.constants.max_ratio > 0.0 && rep.constants.max_ratio.is_finite());
        assert_eq!(rep.constants.trend.len(), 2);
        let bad = ProductInstance::Zero { alpha1: 0.1, alpha2: 0.1, b1: 0.4, b2: 0.4 };
        assert!(product_estimate_check(2.0, ProductWhich::ZeroShift, Some(bad), None, &cfg).is_err());
        assert!(product_estimate_check(2.0, ProductWhich::Weighted, Some(inst), None, &cfg).is_err());
    }
}
