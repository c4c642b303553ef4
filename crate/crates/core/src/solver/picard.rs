use serde::{Deserialize, Serialize};

use super::rhs::derivative;
use super::step::{Propagator, Trajectory};
use super::{DKGState, PhysicsParams};
use crate::error::{Error, Result};
use crate::norms::{restriction_norm, Branch, NormSpec};
use crate::spectral_grid::{Field, ScalarField, SpinorField};

/// Exponents of the restriction norms used for Cauchy differences: `ψ±` in
/// `X^r_{s,b,±}[0,T]`, `φ±` in `X^r_{l,b,±}[0,T]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PicardNorms {
    pub s: f64,
    pub l: f64,
    pub r: f64,
    pub b: f64,
}

impl Default for PicardNorms {
    fn default() -> Self {
        Self {
            s: 0.0,
            l: 0.0,
            r: 2.0,
            b: 0.51,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PicardOutcome {
    /// `u⁽⁰⁾` (free flow), `u⁽¹⁾`, … sampled on `[0, T_local]`.
    pub trajectories: Vec<Trajectory>,
    /// `‖u⁽ⁿ⁺¹⁾ − u⁽ⁿ⁾‖` summed over the four restriction norms.
    pub differences: Vec<f64>,
    pub converged: bool,
    /// The difference grew on three consecutive iterations.
    pub diverged: bool,
}

impl PicardOutcome {
    pub fn limit(&self) -> &Trajectory {
        self.trajectories.last().expect("at least the free flow")
    }

    /// Successive ratios `dₙ₊₁/dₙ`.
    pub fn ratios(&self) -> Vec<f64> {
        self.differences
            .windows(2)
            .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
            .collect()
    }
}

fn free_flow(prop: &Propagator, state0: &DKGState, times: &[f64]) -> Vec<DKGState> {
    times
        .iter()
        .map(|&t| {
            let mut s = prop.applied(state0, t);
            s.time = t;
            s
        })
        .collect()
}

/// One Picard map: free flow plus trapezoidal Duhamel integral of `N(u)`.
fn picard_map(
    prop: &Propagator,
    free: &[DKGState],
    current: &[DKGState],
    params: &PhysicsParams,
    h: f64,
) -> Result<Vec<DKGState>> {
    let nonlin: Vec<DKGState> = current
        .iter()
        .map(|u| derivative(u, params))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(free.len());
    let mut integral = DKGState::zeros(*prop.grid());
    out.push(free[0].clone());
    for j in 0..free.len() - 1 {
        // I_{j+1} = e^{hL}(I_j + h/2 N_j) + h/2 N_{j+1}
        integral.axpy(h / 2.0, &nonlin[j]);
        prop.apply(&mut integral, h);
        integral.axpy(h / 2.0, &nonlin[j + 1]);
        let mut u = free[j + 1].clone();
        u.axpy(1.0, &integral);
        out.push(u);
    }
    Ok(out)
}

/// Window of length `2T` holding `d` on `[0, T]`, continued by the free flow
/// forward from `d(T)` up to `3T/2` and backward from `d(0)` beyond.
fn extended_window<const C: usize>(
    samples: &[Field<C>],
    continued: impl Fn(usize) -> Result<Field<C>>,
    t_local: f64,
) -> Result<Field<C>> {
    let k = samples.len() - 1;
    let mut slices = Vec::with_capacity(2 * k);
    for s in samples {
        slices.push(s.clone().dft_inverse()?);
    }
    for j in k + 1..2 * k {
        slices.push(continued(j)?.dft_inverse()?);
    }
    Field::stack(&slices, 2.0 * t_local)
}

fn difference_norm(
    prop: &Propagator,
    diff: &[DKGState],
    t_local: f64,
    norms: &PicardNorms,
) -> Result<f64> {
    let k = diff.len() - 1;
    let h = t_local / k as f64;
    let continued = |j: usize| {
        let t = j as f64 * h;
        if t <= 1.5 * t_local {
            prop.applied(&diff[k], t - t_local)
        } else {
            prop.applied(&diff[0], t - 2.0 * t_local)
        }
    };
    let mut total = 0.0;
    type Pick<const C: usize> = fn(&DKGState) -> &Field<C>;
    let spinors: [(Pick<2>, Branch); 2] = [
        (|s| &s.psi_plus, Branch::Plus),
        (|s| &s.psi_minus, Branch::Minus),
    ];
    for (pick, branch) in spinors {
        let samples: Vec<SpinorField> = diff.iter().map(|s| pick(s).clone()).collect();
        let w = extended_window(&samples, |j| Ok(pick(&continued(j)).clone()), t_local)?;
        total += restriction_norm(&w, t_local, &NormSpec::xsb(norms.s, norms.b, norms.r, branch))?;
    }
    let scalars: [(Pick<1>, Branch); 2] = [
        (|s| &s.phi_plus, Branch::Plus),
        (|s| &s.phi_minus, Branch::Minus),
    ];
    for (pick, branch) in scalars {
        let samples: Vec<ScalarField> = diff.iter().map(|s| pick(s).clone()).collect();
        let w = extended_window(&samples, |j| Ok(pick(&continued(j)).clone()), t_local)?;
        total += restriction_norm(&w, t_local, &NormSpec::xsb(norms.l, norms.b, norms.r, branch))?;
    }
    Ok(total)
}

/// Picard iteration `u⁽ⁿ⁺¹⁾ = e^{tL}u₀ + ∫₀ᵗ e^{(t−t′)L} N(u⁽ⁿ⁾(t′)) dt′` on
/// `samples + 1` equally spaced times in `[0, t_local]`.
pub fn picard_iterate(
    state0: &DKGState,
    params: &PhysicsParams,
    t_local: f64,
    samples: usize,
    iters: usize,
    tol: f64,
    norms: &PicardNorms,
) -> Result<PicardOutcome> {
    if !(t_local.is_finite() && t_local > 0.0) {
        return Err(Error::Parameter(format!("T_local must be positive, got {t_local}")));
    }
    if samples < 2 {
        return Err(Error::Parameter("Picard iteration needs at least 2 time intervals".into()));
    }
    let prop = Propagator::new(*state0.grid());
    let h = t_local / samples as f64;
    let times: Vec<f64> = (0..=samples).map(|j| j as f64 * h).collect();
    let free = free_flow(&prop, state0, &times);
    let mut outcome = PicardOutcome {
        trajectories: vec![Trajectory { states: free.clone() }],
        differences: Vec::new(),
        converged: false,
        diverged: false,
    };
    let mut current = free.clone();
    let mut growth = 0;
    for _ in 0..iters {
        let next = picard_map(&prop, &free, &current, params, h)?;
        let diff: Vec<DKGState> = next.iter().zip(&current).map(|(a, b)| a.sub(b)).collect();
        let d = difference_norm(&prop, &diff, t_local, norms)?;
        if !d.is_finite() {
            outcome.diverged = true;
            break;
        }
        if let Some(&prev) = outcome.differences.last() {
            growth = if d > prev { growth + 1 } else { 0 };
        }
        outcome.differences.push(d);
        outcome.trajectories.push(Trajectory { states: next.clone() });
        current = next;
        if d < tol {
            outcome.converged = true;
            break;
        }
        if growth >= 3 {
            outcome.diverged = true;
            break;
        }
    }
    Ok(outcome)
}

/// Largest `T_local = t_start·2^k` (k ≤ `max_doublings`) at which the iteration
/// still converges with every successive ratio below 1. Exploratory: returns
/// 0 if even `t_start` fails.
pub fn picard_horizon(
    state0: &DKGState,
    params: &PhysicsParams,
    norms: &PicardNorms,
    t_start: f64,
    max_doublings: usize,
) -> Result<f64> {
    let mut best = 0.0;
    let mut t = t_start;
    for _ in 0..=max_doublings {
        let out = picard_iterate(state0, params, t, 16, 40, 1e-9, norms)?;
        let contracting = out.converged && out.ratios().iter().all(|&q| q < 1.0);
        if !contracting {
            break;
        }
        best = t;
        t *= 2.0;
    }
    Ok(best)
}
