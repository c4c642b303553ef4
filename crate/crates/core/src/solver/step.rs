use num_complex::Complex64;

use super::rhs::derivative;
use super::{DKGState, PhysicsParams, SolverConfig, SolverMode};
use crate::error::{Error, Result};
use crate::spectral_grid::{japanese, GridSpec, ScalarField, SpinorField};

/// Exact linear flow `e^{hL}`: `e^{∓ih|ξ|}` on `ψ±`, `e^{∓ih⟨ξ⟩}` on `φ±`.
#[derive(Clone, Debug)]
pub struct Propagator {
    grid: GridSpec,
    abs_xi: Vec<f64>,
    bracket: Vec<f64>,
}

impl Propagator {
    pub fn new(grid: GridSpec) -> Self {
        let (abs_xi, bracket) = (0..grid.len())
            .map(|i| {
                let a = grid.frequency(i).abs_xi();
                (a, japanese(a))
            })
            .unzip();
        Self {
            grid,
            abs_xi,
            bracket,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn rotate_spinor(f: &mut SpinorField, omega: &[f64], h: f64) {
        for c in 0..2 {
            for (v, w) in f.component_mut(c).iter_mut().zip(omega) {
                *v *= Complex64::from_polar(1.0, h * w);
            }
        }
    }

    fn rotate_scalar(f: &mut ScalarField, omega: &[f64], h: f64) {
        for (v, w) in f.component_mut(0).iter_mut().zip(omega) {
            *v *= Complex64::from_polar(1.0, h * w);
        }
    }

    /// Applies `e^{hL}` in place (any real `h`, including negative).
    pub fn apply(&self, state: &mut DKGState, h: f64) {
        Self::rotate_spinor(&mut state.psi_plus, &self.abs_xi, -h);
        Self::rotate_spinor(&mut state.psi_minus, &self.abs_xi, h);
        Self::rotate_scalar(&mut state.phi_plus, &self.bracket, -h);
        Self::rotate_scalar(&mut state.phi_minus, &self.bracket, h);
    }

    pub fn applied(&self, state: &DKGState, h: f64) -> DKGState {
        let mut out = state.clone();
        self.apply(&mut out, h);
        out
    }
}

/// One step of the twisted explicit midpoint rule:
///
/// ```text
/// u½   = e^{hL/2}(uₙ + h/2 · N(uₙ))
/// uₙ₊₁ = e^{hL}uₙ + h · e^{hL/2} N(u½)
/// ```
pub fn step_exponential(
    state: &DKGState,
    params: &PhysicsParams,
    config: &SolverConfig,
    prop: &Propagator,
) -> Result<DKGState> {
    config.validate()?;
    if config.mode != SolverMode::ExponentialStep {
        return Err(Error::Parameter("step_exponential needs mode exponential_step".into()));
    }
    let h = config.dt;
    let n0 = derivative(state, params)?;
    let mut half = state.clone();
    half.axpy(h / 2.0, &n0);
    prop.apply(&mut half, h / 2.0);
    half.time = state.time + h / 2.0;
    let mut n_half = derivative(&half, params)?;
    prop.apply(&mut n_half, h / 2.0);
    let mut next = prop.applied(state, h);
    next.axpy(h, &n_half);
    next.time = state.time + h;
    if !next.is_finite() || next.coefficient_norm() > 1e150 {
        return Err(Error::BlowUp { time: next.time });
    }
    Ok(next)
}

/// Recorded states at equally spaced times.
#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub states: Vec<DKGState>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.time).collect()
    }

    pub fn last(&self) -> Option<&DKGState> {
        self.states.last()
    }

    /// Spacing of the recorded samples (0 for fewer than two).
    pub fn spacing(&self) -> f64 {
        match self.states.as_slice() {
            [a, b, ..] => b.time - a.time,
            _ => 0.0,
        }
    }

    /// Physical `(ψ, φ)` stacked into space-time fields whose time axis has
    /// spacing [`Trajectory::spacing`].
    pub fn to_space_time(&self) -> Result<(SpinorField, ScalarField)> {
        let mut psis = Vec::with_capacity(self.states.len());
        let mut phis = Vec::with_capacity(self.states.len());
        for s in &self.states {
            let r = super::reassemble(s)?;
            psis.push(r.psi);
            phis.push(r.phi);
        }
        let window = self.spacing() * self.states.len() as f64;
        Ok((SpinorField::stack(&psis, window)?, ScalarField::stack(&phis, window)?))
    }
}

/// Runs `config.steps` steps, recording the initial state and every
/// `record_every`-th state.
pub fn evolve(
    state: &DKGState,
    params: &PhysicsParams,
    config: &SolverConfig,
    record_every: usize,
) -> Result<Trajectory> {
    let prop = Propagator::new(*state.grid());
    let every = record_every.max(1);
    let mut traj = Trajectory {
        states: vec![state.clone()],
    };
    let mut cur = state.clone();
    for n in 1..=config.steps {
        cur = step_exponential(&cur, params, config, &prop)?;
        if n % every == 0 {
            traj.states.push(cur.clone());
        }
    }
    Ok(traj)
}
