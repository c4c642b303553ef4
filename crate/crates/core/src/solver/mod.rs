//! The half-wave split Dirac–Klein–Gordon system.
//!
//! With `ψ± = Π±(D)ψ`, `φ± = φ ± iA^{−1/2}∂ₜφ`, `A = −Δ + 1` and coupling `c`:
//!
//! ```text
//! (−i∂ₜ ± |D|)ψ± = Π±(D)[β(M + cφ)ψ]
//! (i∂ₜ ∓ A^{1/2})φ± = ∓A^{−1/2}[c⟨βψ,ψ⟩ + (m+1)φ]
//! ```
//!
//! where `ψ = ψ₊ + ψ₋` and `φ = ½(φ₊ + φ₋)`. The state lives in Fourier space;
//! the linear part is integrated exactly and quadratic products are dealiased
//! by the 2/3 rule.

mod data;
mod diagnostics;
mod picard;
mod rhs;
mod split;
mod step;

pub use data::InitialData;
pub use diagnostics::{charge, projection_leakage, residual_original, Residuals};
pub use picard::{picard_horizon, picard_iterate, PicardNorms, PicardOutcome};
pub use rhs::{nonlinearity, rhs_dirac, rhs_kg, Nonlinearity};
pub use split::{reassemble, split_data, Reassembled};
pub use step::{evolve, step_exponential, Propagator, Trajectory};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dirac_algebra::{projection, Sign};
use crate::error::{Error, Result};
use crate::spectral_grid::{GridSpec, Representation, ScalarField, SpinorField};

fn default_coupling() -> f64 {
    1.0
}

/// Masses `M` (Dirac) and `m` (Klein–Gordon), plus the strength `c` of the
/// quadratic coupling (1 for the physical system, 0 to switch it off).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicsParams {
    #[serde(rename = "M")]
    pub dirac_mass: f64,
    #[serde(rename = "m")]
    pub kg_mass: f64,
    #[serde(default = "default_coupling")]
    pub coupling: f64,
}

impl PhysicsParams {
    pub fn new(dirac_mass: f64, kg_mass: f64) -> Self {
        Self {
            dirac_mass,
            kg_mass,
            coupling: 1.0,
        }
    }

    /// Parameters for which the whole nonlinearity vanishes.
    pub fn free() -> Self {
        Self {
            dirac_mass: 0.0,
            kg_mass: -1.0,
            coupling: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dirac_mass.is_finite() && self.kg_mass.is_finite() && self.coupling.is_finite()) {
            return Err(Error::Parameter("physics parameters must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMode {
    ExponentialStep,
    Picard,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dt: f64,
    pub steps: usize,
    #[serde(default = "default_picard_iters")]
    pub picard_iters: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    pub mode: SolverMode,
}

fn default_picard_iters() -> usize {
    30
}

fn default_tol() -> f64 {
    1e-10
}

impl SolverConfig {
    pub fn stepping(dt: f64, steps: usize) -> Self {
        Self {
            dt,
            steps,
            picard_iters: default_picard_iters(),
            tol: default_tol(),
            mode: SolverMode::ExponentialStep,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Parameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Parameter(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// `(ψ₊, ψ₋, φ₊, φ₋)` in Fourier representation on one spatial grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DKGState {
    pub psi_plus: SpinorField,
    pub psi_minus: SpinorField,
    pub phi_plus: ScalarField,
    pub phi_minus: ScalarField,
    pub time: f64,
}

impl DKGState {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            psi_plus: SpinorField::zeros(grid, Representation::Fourier),
            psi_minus: SpinorField::zeros(grid, Representation::Fourier),
            phi_plus: ScalarField::zeros(grid, Representation::Fourier),
            phi_minus: ScalarField::zeros(grid, Representation::Fourier),
            time: 0.0,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        self.psi_plus.grid()
    }

    /// `self += a · other` on all four fields.
    pub fn axpy(&mut self, a: f64, other: &DKGState) {
        let a = Complex64::new(a, 0.0);
        self.psi_plus.axpy(a, &other.psi_plus);
        self.psi_minus.axpy(a, &other.psi_minus);
        self.phi_plus.axpy(a, &other.phi_plus);
        self.phi_minus.axpy(a, &other.phi_minus);
    }

    pub fn sub(&self, other: &DKGState) -> DKGState {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    /// `ℓ²` size of all coefficients together.
    pub fn coefficient_norm(&self) -> f64 {
        (self.psi_plus.sum_sq()
            + self.psi_minus.sum_sq()
            + self.phi_plus.sum_sq()
            + self.phi_minus.sum_sq())
        .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        [&self.psi_plus, &self.psi_minus]
            .iter()
            .flat_map(|f| f.components().iter().flatten())
            .chain(
                [&self.phi_plus, &self.phi_minus]
                    .iter()
                    .flat_map(|f| f.components().iter().flatten()),
            )
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// `Π±(D)ψ` for a spinor in Fourier representation.
pub fn project(psi: &SpinorField, sign: Sign) -> Result<SpinorField> {
    psi.expect_rep(Representation::Fourier)?;
    let grid = *psi.grid();
    let mut out = psi.clone();
    for idx in 0..grid.len() {
        let p = projection(grid.frequency(idx).xi, sign);
        out.set_value(idx, p.apply(psi.value(idx)));
    }
    Ok(out)
}

pub(crate) fn to_fourier<const C: usize>(
    f: &crate::spectral_grid::Field<C>,
) -> Result<crate::spectral_grid::Field<C>> {
    match f.rep() {
        Representation::Fourier => Ok(f.clone()),
        Representation::Physical => f.clone().dft_forward(),
    }
}
