use std::fs;

use dkg_core::dirac_algebra::{Sign, SignPair};
use dkg_core::harness::angles::{verify_angle_bound_16, verify_angle_equivalence, Equivalence};
use dkg_core::harness::bilinear::{
    bilinear_constant_11, bilinear_constant_12, resolution_growth, BilinearParams, ProtocolConfig,
};
use dkg_core::harness::cone::cone_exponent_check;
use dkg_core::harness::nullform::verify_nullform_13;
use dkg_core::harness::product::product_estimate_check;
use dkg_core::harness::region::{
    admissible_region, in_r2_region, parse_decimal, thresholds, to_f64, RegionQuery, RegionVariant, Q,
};
use dkg_core::harness::sampling::gaussian;
use dkg_core::harness::scaling::scaling_check;
use dkg_core::harness::transfer::transfer_comparison;
use dkg_core::harness::{SampleConfig, DEFAULT_EPSILON};
use dkg_core::norms::{fourier_lebesgue_norm, restriction_norm, xsb_norm, Branch, NormSpec};
use dkg_core::rng::substream;
use dkg_core::solver::{
    charge, picard_iterate, projection_leakage, reassemble, split_data, step_exponential, DKGState, PicardNorms,
    Propagator, SolverMode, Trajectory,
};
use dkg_core::spectral_grid::io;
use dkg_core::{EstimateReport, Error, Field, GridSpec, Representation, ScalarField, SpinorField};
use serde_json::{json, Value};

use crate::manifest::{
    Check, Command, Manifest, NormsParams, RegionParams, ScalingParams, SimulateParams, Source, VerifyParams,
};
use crate::output::{num, resolve_dir, Outputs};
use crate::{Cli, Failure};

/// Largest accepted relative change of an angle ratio's running sup over the
/// last doubling of the sample count.
pub const ANGLE_STABILITY: f64 = 0.05;

/// Largest accepted growth factor of a bilinear constant from the coarsest
/// to the finest resolution.
pub const BILINEAR_GROWTH: f64 = 1.5;

pub fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.command == Command::Region && cli.manifest.is_none() {
        return region_from_flags(cli);
    }
    let path = cli
        .manifest
        .as_ref()
        .ok_or_else(|| Failure::Usage(format!("{} needs --manifest", cli.command.name())))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let src = Source::new(text);
    let cmd = src.command().map_err(Failure::Usage)?;
    if cmd != cli.command {
        return Err(Failure::Usage(format!(
            "manifest is for `{}`, not `{}`",
            cmd.name(),
            cli.command.name()
        )));
    }
    match cmd {
        Command::Simulate => simulate(cli, &src, src.parse().map_err(Failure::Usage)?),
        Command::Verify => verify(cli, &src, src.parse().map_err(Failure::Usage)?),
        Command::Norms => norms(cli, &src, src.parse().map_err(Failure::Usage)?),
        Command::Region => region_from_manifest(cli, &src, src.parse().map_err(Failure::Usage)?),
        Command::Scaling => scaling(cli, &src, src.parse().map_err(Failure::Usage)?),
    }
}

struct Ctx {
    out: Outputs,
    seed: u64,
    epsilon: f64,
    allow_inadmissible: bool,
}

fn context<P>(cli: &Cli, src: &Source, m: &Manifest<P>) -> Result<Ctx, Failure> {
    let seed = cli.seed.or(m.seed).unwrap_or(0);
    let epsilon = cli.epsilon.or(m.epsilon).unwrap_or(DEFAULT_EPSILON);
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Failure::Usage(format!("epsilon must be positive, got {epsilon}")));
    }
    let dir = resolve_dir(cli.out.as_deref(), m.out.as_deref());
    Ok(Ctx {
        out: Outputs::new(dir, src.sha256.clone(), seed)?,
        seed,
        epsilon,
        allow_inadmissible: cli.override_hypotheses,
    })
}

fn spec_label(prefix: &str, spec: &NormSpec) -> String {
    let mut label = format!("{prefix}_H_s{}_r{}", spec.s, spec.r);
    if spec.branch != Branch::None {
        label.push_str(&format!("_b{}_{:?}", spec.b, spec.branch).to_lowercase());
    }
    if spec.homogeneous {
        label.push_str("_hom");
    }
    if spec.dual {
        label.push_str("_dual");
    }
    label
}

fn simulate(cli: &Cli, src: &Source, m: Manifest<SimulateParams>) -> Result<(), Failure> {
    let ctx = context(cli, src, &m)?;
    let p = &m.parameters;
    p.physics.validate()?;
    p.solver.validate()?;
    for spec in &p.norms {
        spec.validate()?;
        if spec.branch != Branch::None {
            return Err(Failure::Usage("simulate records spatial norms only (branch \"none\")".into()));
        }
    }
    let every = p.record_every.max(1);
    let grid = GridSpec::spatial(p.grid.n_x, p.grid.period)?;
    let (psi0, phi0, phi1) = p.data.build(grid, ctx.seed)?;
    let state0 = split_data(&psi0, &phi0, &phi1)?;

    let mut blow_up = None;
    let mut picard = Value::Null;
    let states: Vec<DKGState> = match p.solver.mode {
        SolverMode::ExponentialStep => {
            let prop = Propagator::new(grid);
            let mut states = vec![state0.clone()];
            let mut cur = state0;
            for n in 1..=p.solver.steps {
                match step_exponential(&cur, &p.physics, &p.solver, &prop) {
                    Ok(next) => cur = next,
                    Err(e @ Error::BlowUp { .. }) => {
                        blow_up = Some(e.to_string());
                        break;
                    }
                    Err(e) => return Err(e.into()),
                }
                if n % every == 0 {
                    states.push(cur.clone());
                }
            }
            states
        }
        SolverMode::Picard => {
            let t_local = p.solver.dt * p.solver.steps as f64;
            let out = picard_iterate(
                &state0,
                &p.physics,
                t_local,
                p.solver.steps,
                p.solver.picard_iters,
                p.solver.tol,
                &PicardNorms::default(),
            )?;
            if out.diverged {
                blow_up = Some("Picard iteration diverged".into());
            }
            picard = json!({
                "t_local": t_local,
                "iterations": out.differences.len(),
                "differences": out.differences,
                "ratios": out.ratios(),
                "converged": out.converged,
                "diverged": out.diverged,
            });
            out.limit().states.iter().step_by(every).cloned().collect()
        }
    };

    let mut header = vec!["t".to_string(), "charge".to_string()];
    for spec in &p.norms {
        header.push(spec_label("psi", spec));
    }
    for spec in &p.norms {
        header.push(spec_label("phi", spec));
    }
    let mut rows = Vec::with_capacity(states.len());
    let mut charges = Vec::with_capacity(states.len());
    for state in &states {
        let q = charge(&state.psi_plus, &state.psi_minus)?;
        charges.push(q);
        let mut row = vec![num(state.time), num(q)];
        if !p.norms.is_empty() {
            let re = reassemble(state)?;
            let psi = re.psi.dft_forward()?;
            let phi = re.phi.dft_forward()?;
            for spec in &p.norms {
                row.push(num(fourier_lebesgue_norm(&psi, spec)?));
            }
            for spec in &p.norms {
                row.push(num(fourier_lebesgue_norm(&phi, spec)?));
            }
        }
        rows.push(row);
    }
    ctx.out.series(&header, &rows)?;

    let q0 = charges.first().copied().unwrap_or(0.0);
    let drift = charges.iter().map(|q| (q - q0).abs()).fold(0.0, f64::max);
    let last = states.last().expect("initial state is recorded");
    ctx.out.report(
        "simulate",
        json!({
            "status": if blow_up.is_some() { "blow_up" } else { "completed" },
            "message": blow_up,
            "grid": grid,
            "physics": p.physics,
            "solver": p.solver,
            "data": p.data,
            "record_every": every,
            "records": states.len(),
            "final_time": last.time,
            "charge": { "initial": q0, "final": charges.last(), "max_drift": drift },
            "projection_leakage": projection_leakage(last)?,
            "picard": picard,
        }),
    )?;

    if p.fields && states.len() >= 2 {
        let (psi, phi) = Trajectory { states }.to_space_time()?;
        ctx.out.fields(&[
            ("psi.dkgf".to_string(), io::encode(&psi)),
            ("phi.dkgf".to_string(), io::encode(&phi)),
        ])?;
    }
    match blow_up {
        Some(msg) => Err(Failure::BlowUp(msg)),
        None => Ok(()),
    }
}

fn parse_signs(text: &str) -> Result<SignPair, Failure> {
    let sign = |c| match c {
        '+' => Ok(Sign::Plus),
        '-' => Ok(Sign::Minus),
        _ => Err(Failure::Usage(format!("signs must be two of '+'/'-', got {text:?}"))),
    };
    let cs: Vec<char> = text.chars().collect();
    match cs.as_slice() {
        [a, b] => Ok(SignPair::new(sign(*a)?, sign(*b)?)),
        _ => Err(Failure::Usage(format!("signs must be two of '+'/'-', got {text:?}"))),
    }
}

struct Outcome {
    reports: Vec<EstimateReport>,
    passed: bool,
    criterion: String,
}

fn doubling_change(rep: &EstimateReport) -> Option<f64> {
    rep.parameters.get("last_doubling_change").and_then(Value::as_f64)
}

fn run_check(check: &Check, ctx: &Ctx, v: &VerifyParams) -> Result<Outcome, Failure> {
    let protocol = |samples: usize, resolutions: &[usize]| ProtocolConfig {
        samples,
        resolutions: resolutions.to_vec(),
        period: v.period,
        window: v.window,
        seed: ctx.seed,
        allow_inadmissible: ctx.allow_inadmissible,
    };
    let sample_cfg = |count, range_min, range_max| SampleConfig {
        count,
        range_min,
        range_max,
        seed: ctx.seed,
    };
    let stability = format!("running sup changes by at most {ANGLE_STABILITY} over the last doubling");
    Ok(match check {
        Check::Angle14 { count, range_min, range_max } | Check::Angle15 { count, range_min, range_max } => {
            let which = if matches!(check, Check::Angle14 { .. }) { Equivalence::A } else { Equivalence::B };
            let rep = verify_angle_equivalence(which, &sample_cfg(*count, *range_min, *range_max))?;
            let c = &rep.constants;
            let passed = c.min_ratio > 0.0
                && c.max_ratio.is_finite()
                && doubling_change(&rep).is_none_or(|d| d <= ANGLE_STABILITY);
            Outcome {
                reports: vec![rep],
                passed,
                criterion: format!("ratios in (0, ∞); {stability}"),
            }
        }
        Check::Angle16 { count, range_min, range_max, denominator } => {
            let rep = verify_angle_bound_16(&sample_cfg(*count, *range_min, *range_max), *denominator)?;
            let passed =
                rep.constants.max_ratio.is_finite() && doubling_change(&rep).is_none_or(|d| d <= ANGLE_STABILITY);
            Outcome {
                reports: vec![rep],
                passed,
                criterion: format!("finite sup; {stability}"),
            }
        }
        Check::Nullform13 { n_x, n_t, seeds } => {
            let grid = GridSpec::space_time(*n_x, v.period, *n_t, v.window)?;
            let mut reports = Vec::new();
            for k in 0..*seeds as u64 {
                let mut rng = substream(ctx.seed, k);
                let psi: SpinorField = gaussian(grid, &mut rng);
                let psi2: SpinorField = gaussian(grid, &mut rng);
                for signs in SignPair::ALL {
                    reports.push(verify_nullform_13(&psi, &psi2, signs, ctx.seed)?);
                }
            }
            let passed = reports.iter().all(|r| r.passed == Some(true));
            Outcome {
                reports,
                passed,
                criterion: "pointwise bound with constant at most 1/2".into(),
            }
        }
        Check::Bilinear11 { r, s, l, b, samples, resolutions }
        | Check::Bilinear12 { r, s, l, b, samples, resolutions } => {
            let params = BilinearParams {
                r: *r,
                s: *s,
                l: *l,
                b: *b,
                epsilon: ctx.epsilon,
            };
            let cfg = protocol(*samples, resolutions);
            let rep = if matches!(check, Check::Bilinear11 { .. }) {
                bilinear_constant_11(&params, &cfg)?
            } else {
                bilinear_constant_12(&params, &cfg)?
            };
            let growth = resolution_growth(&rep).unwrap_or(1.0);
            Outcome {
                reports: vec![rep],
                passed: growth.is_finite() && growth < BILINEAR_GROWTH,
                criterion: format!("constant grows by a factor below {BILINEAR_GROWTH} across resolutions"),
            }
        }
        Check::Product { r, which, instance, reduction, samples, resolutions } => {
            let cfg = protocol(*samples, resolutions);
            let reduction = reduction.map(|[s, l, b]| (s, l, b, ctx.epsilon));
            let rep = product_estimate_check(*r, *which, *instance, reduction, &cfg)?;
            let passed = rep.passed != Some(false) && rep.constants.max_ratio.is_finite();
            Outcome {
                reports: vec![rep],
                passed,
                criterion: "hypotheses hold and the constant is finite".into(),
            }
        }
        Check::Cone { r, branch } => {
            let rep = cone_exponent_check(*branch, *r)?;
            let passed = rep.passed == Some(true);
            Outcome {
                reports: vec![rep],
                passed,
                criterion: "fitted exponents within tolerance of the reference".into(),
            }
        }
        Check::Transfer { p, q, r, s1, s2, b, n, samples, signs } => {
            let cfg = protocol(*samples, &[*n]);
            let rep = transfer_comparison(parse_signs(signs)?, *p, *q, *r, *s1, *s2, *b, *n, &cfg)?;
            let passed = rep.constants.max_ratio.is_finite();
            Outcome {
                reports: vec![rep],
                passed,
                criterion: "finite constant".into(),
            }
        }
    })
}

fn verify(cli: &Cli, src: &Source, m: Manifest<VerifyParams>) -> Result<(), Failure> {
    let ctx = context(cli, src, &m)?;
    if m.parameters.checks.is_empty() {
        return Err(Failure::Usage("verify needs at least one check".into()));
    }
    let header: Vec<String> = ["check", "report", "operation", "at", "max_ratio"].map(String::from).to_vec();
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut failed = Vec::new();
    for check in &m.parameters.checks {
        let out = run_check(check, &ctx, &m.parameters)?;
        for (i, rep) in out.reports.iter().enumerate() {
            let points: Vec<(usize, f64)> = if rep.constants.trend.is_empty() {
                vec![(rep.count, rep.constants.max_ratio)]
            } else {
                rep.constants.trend.iter().map(|t| (t.at, t.max_ratio)).collect()
            };
            for (at, max) in points {
                rows.push(vec![
                    check.name().to_string(),
                    i.to_string(),
                    rep.operation.clone(),
                    at.to_string(),
                    num(max),
                ]);
            }
        }
        if !out.passed {
            failed.push(check.name());
        }
        entries.push(json!({
            "check": check.name(),
            "input": check,
            "passed": out.passed,
            "criterion": out.criterion,
            "reports": out.reports,
        }));
    }
    ctx.out.series(&header, &rows)?;
    ctx.out.report(
        "verify",
        json!({ "epsilon": ctx.epsilon, "override_hypotheses": ctx.allow_inadmissible, "checks": entries }),
    )?;
    for e in &entries {
        println!(
            "{}: {}",
            e["check"].as_str().unwrap_or_default(),
            if e["passed"].as_bool() == Some(true) { "pass" } else { "FAIL" }
        );
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("failed checks: {}", failed.join(", "))))
    }
}

fn measure<const C: usize>(f: &Field<C>, spec: &NormSpec, t_sub: Option<f64>) -> dkg_core::Result<f64> {
    match (spec.branch, t_sub) {
        (Branch::None, _) => fourier_lebesgue_norm(f, spec),
        (_, Some(t)) => restriction_norm(f, t, spec),
        (_, None) => xsb_norm(f, spec),
    }
}

fn fourier<const C: usize>(f: Field<C>) -> dkg_core::Result<Field<C>> {
    match f.rep() {
        Representation::Physical => f.dft_forward(),
        Representation::Fourier => Ok(f),
    }
}

enum Measured {
    Scalar(ScalarField),
    Spinor(SpinorField),
}

fn norms(cli: &Cli, src: &Source, m: Manifest<NormsParams>) -> Result<(), Failure> {
    let ctx = context(cli, src, &m)?;
    let p = &m.parameters;
    for spec in &p.specs {
        spec.validate()?;
    }
    let fields: Vec<(String, Measured)> = match (&p.input, &p.grid, &p.data) {
        (Some(path), None, None) => {
            let bytes = fs::read(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            let field = match io::component_count(&bytes)? {
                1 => Measured::Scalar(fourier(io::decode::<1>(&bytes)?)?),
                _ => Measured::Spinor(fourier(io::decode::<2>(&bytes)?)?),
            };
            vec![(path.display().to_string(), field)]
        }
        (None, Some(g), Some(data)) => {
            let grid = GridSpec::spatial(g.n_x, g.period)?;
            let (psi0, phi0, phi1) = data.build(grid, ctx.seed)?;
            vec![
                ("psi0".into(), Measured::Spinor(psi0.dft_forward()?)),
                ("phi0".into(), Measured::Scalar(phi0.dft_forward()?)),
                ("phi1".into(), Measured::Scalar(phi1.dft_forward()?)),
            ]
        }
        _ => return Err(Failure::Usage("norms needs either `input` or both `grid` and `data`".into())),
    };
    let header: Vec<String> =
        ["field", "s", "r", "b", "branch", "homogeneous", "dual", "value"].map(String::from).to_vec();
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for (name, field) in &fields {
        for spec in &p.specs {
            let value = match field {
                Measured::Scalar(f) => measure(f, spec, p.t_sub)?,
                Measured::Spinor(f) => measure(f, spec, p.t_sub)?,
            };
            rows.push(vec![
                name.clone(),
                spec.s.to_string(),
                spec.r.to_string(),
                spec.b.to_string(),
                format!("{:?}", spec.branch).to_lowercase(),
                spec.homogeneous.to_string(),
                spec.dual.to_string(),
                num(value),
            ]);
            values.push(json!({ "field": name, "spec": spec, "value": value }));
        }
    }
    ctx.out.series(&header, &rows)?;
    ctx.out.report("norms", json!({ "t_sub": p.t_sub, "norms": values }))?;
    Ok(())
}

fn parse_variant(text: &str) -> Result<RegionVariant, Failure> {
    RegionVariant::BOTH
        .into_iter()
        .find(|v| v.name() == text)
        .ok_or_else(|| Failure::Usage(format!("variant must be minimal_s or minimal_l, got {text:?}")))
}

/// Shortest decimal text of an exact rational.
fn decimal(x: Q) -> String {
    to_f64(x).to_string()
}

fn region_result(r_text: &str, delta_text: &str, variant: RegionVariant) -> Result<(String, Value), Failure> {
    let r = parse_decimal(r_text)?;
    let delta = parse_decimal(delta_text)?;
    let (s, l) = admissible_region(&RegionQuery { r, delta, variant })?;
    let (s0, l0) = thresholds(r, variant);
    let mut text = format!(
        "{} at r = {r_text}: (s, l) = ({}+δ, {}+δ) = ({s}, {l}) ≈ ({:.6}, {:.6})",
        variant.name(),
        decimal(s0),
        decimal(l0),
        to_f64(s),
        to_f64(l),
    );
    let r2 = (r == Q::from_integer(2)).then(|| in_r2_region(s, l));
    if let Some(inside) = r2 {
        text.push_str(&format!(
            "\nr = 2 product region: {}",
            if inside { "(s, l) inside" } else { "(s, l) outside" }
        ));
    }
    let body = json!({
        "r": r_text,
        "delta": delta_text,
        "variant": variant,
        "threshold": { "s": s0.to_string(), "l": l0.to_string() },
        "pair": { "s": s.to_string(), "l": l.to_string() },
        "pair_f64": { "s": to_f64(s), "l": to_f64(l) },
        "r2_region": r2,
    });
    Ok((text, body))
}

fn region_from_flags(cli: &Cli) -> Result<(), Failure> {
    let need = |v: &Option<String>, flag: &str| {
        v.clone()
            .ok_or_else(|| Failure::Usage(format!("region needs --manifest or --r, --delta and --variant (missing {flag})")))
    };
    let r = need(&cli.r, "--r")?;
    let delta = need(&cli.delta, "--delta")?;
    let variant = parse_variant(&need(&cli.variant, "--variant")?)?;
    let (text, body) = region_result(&r, &delta, variant)?;
    println!("{text}");
    if let Some(dir) = &cli.out {
        let args = format!("region --r {r} --delta {delta} --variant {}", variant.name());
        let out = Outputs::new(dir.clone(), Source::new(args).sha256, cli.seed.unwrap_or(0))?;
        out.report("region", body)?;
    }
    Ok(())
}

fn region_from_manifest(cli: &Cli, src: &Source, m: Manifest<RegionParams>) -> Result<(), Failure> {
    let p = &m.parameters;
    let (text, body) = region_result(&p.r.text(), &p.delta.text(), p.variant)?;
    let ctx = context(cli, src, &m)?;
    println!("{text}");
    ctx.out.report("region", body)?;
    Ok(())
}

fn scaling(cli: &Cli, src: &Source, m: Manifest<ScalingParams>) -> Result<(), Failure> {
    let ctx = context(cli, src, &m)?;
    let p = &m.parameters;
    if p.cases.is_empty() {
        return Err(Failure::Usage("scaling needs at least one case".into()));
    }
    let header: Vec<String> = ["s", "r", "kind", "measured", "expected", "passed"].map(String::from).to_vec();
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut failed = 0;
    for case in &p.cases {
        let rep = scaling_check(case.s, case.r, case.kind, p.n_x)?;
        let passed = rep.passed == Some(true);
        failed += usize::from(!passed);
        rows.push(vec![
            case.s.to_string(),
            case.r.to_string(),
            format!("{:?}", case.kind).to_lowercase(),
            num(rep.lhs.unwrap_or(f64::NAN)),
            num(rep.rhs.unwrap_or(f64::NAN)),
            passed.to_string(),
        ]);
        reports.push(rep);
    }
    ctx.out.series(&header, &rows)?;
    ctx.out.report("scaling", json!({ "n_x": p.n_x, "reports": reports }))?;
    if failed > 0 {
        Err(Failure::Verification(format!("{failed} scaling case(s) failed")))
    } else {
        Ok(())
    }
}
