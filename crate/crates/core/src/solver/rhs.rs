use num_complex::Complex64;

use super::{project, DKGState, PhysicsParams};
use crate::dirac_algebra::Sign;
use crate::error::{Error, Result};
use crate::spectral_grid::{symbols, two_thirds_mask, Representation, ScalarField, SpinorField};

/// Right-hand sides of the split system at one state.
#[derive(Clone, Debug)]
pub struct Nonlinearity {
    /// `F± = Π±(D)[β(M + cφ)ψ]`, the right side of `(−i∂ₜ ± |D|)ψ±`.
    pub dirac_plus: SpinorField,
    pub dirac_minus: SpinorField,
    /// `A^{−1/2}Q` with `Q = c⟨βψ,ψ⟩ + (m+1)φ`; the right side of
    /// `(i∂ₜ ∓ A^{1/2})φ±` is `∓A^{−1/2}Q`.
    pub kg_source: ScalarField,
}

/// Computes both right-hand sides with one set of transforms.
///
/// The products `φβψ` and `⟨βψ,ψ⟩` are formed in physical space from
/// 2/3-truncated factors and truncated again; the mass terms are exact.
pub fn nonlinearity(state: &DKGState, params: &PhysicsParams) -> Result<Nonlinearity> {
    params.validate()?;
    state.psi_plus.expect_rep(Representation::Fourier)?;
    let grid = *state.grid();
    let keep = two_thirds_mask(&grid);
    let c = params.coupling;

    let psi = state.psi_plus.add(&state.psi_minus);
    let phi = state.phi_plus.add(&state.phi_minus).scaled(0.5);

    // Mβψ, computed directly on coefficients.
    let mut g = psi.clone();
    for v in g.component_mut(1) {
        *v = -*v;
    }
    g.scale(Complex64::new(params.dirac_mass, 0.0));

    let mut q = phi.clone();
    q.scale(Complex64::new(params.kg_mass + 1.0, 0.0));

    if c != 0.0 {
        let mut psi_t = psi.clone();
        psi_t.mask(&keep);
        let mut phi_t = phi.clone();
        phi_t.mask(&keep);
        let psi_p = psi_t.dft_inverse()?;
        let phi_p = phi_t.dft_inverse()?;

        let mut yukawa = SpinorField::zeros(grid, Representation::Physical);
        let mut density = ScalarField::zeros(grid, Representation::Physical);
        for idx in 0..grid.len() {
            let [a, b] = psi_p.value(idx);
            let f = phi_p.component(0)[idx];
            yukawa.set_value(idx, [f * a, -f * b]);
            density.component_mut(0)[idx] = Complex64::new(a.norm_sqr() - b.norm_sqr(), 0.0);
        }
        let mut yukawa = yukawa.dft_forward()?;
        yukawa.mask(&keep);
        g.axpy(Complex64::new(c, 0.0), &yukawa);
        let mut density = density.dft_forward()?;
        density.mask(&keep);
        q.axpy(Complex64::new(c, 0.0), &density);
    }

    q.apply_real_multiplier(symbols::a_power(-0.5))?;
    Ok(Nonlinearity {
        dirac_plus: project(&g, Sign::Plus)?,
        dirac_minus: project(&g, Sign::Minus)?,
        kg_source: q,
    })
}

/// Right side of `(−i∂ₜ ± |D|)ψ± = …` (Fourier representation).
pub fn rhs_dirac(state: &DKGState, params: &PhysicsParams, sign: Sign) -> Result<SpinorField> {
    let n = nonlinearity(state, params)?;
    Ok(match sign {
        Sign::Plus => n.dirac_plus,
        Sign::Minus => n.dirac_minus,
    })
}

/// Right side of `(i∂ₜ ∓ A^{1/2})φ± = ∓A^{−1/2}Q` (Fourier representation).
pub fn rhs_kg(state: &DKGState, params: &PhysicsParams, sign: Sign) -> Result<ScalarField> {
    let n = nonlinearity(state, params)?;
    Ok(n.kg_source.scaled(-sign.value()))
}

impl Nonlinearity {
    /// Time derivative contributions `N(u)`: `iF±` for `ψ±` and `±iA^{−1/2}Q`
    /// for `φ±`.
    pub fn as_derivative(self, time: f64) -> DKGState {
        let i = Complex64::new(0.0, 1.0);
        let mut psi_plus = self.dirac_plus;
        psi_plus.scale(i);
        let mut psi_minus = self.dirac_minus;
        psi_minus.scale(i);
        let mut phi_plus = self.kg_source;
        phi_plus.scale(i);
        let phi_minus = phi_plus.clone().scaled(-1.0);
        DKGState {
            psi_plus,
            psi_minus,
            phi_plus,
            phi_minus,
            time,
        }
    }
}

pub(crate) fn derivative(state: &DKGState, params: &PhysicsParams) -> Result<DKGState> {
    let n = nonlinearity(state, params)?.as_derivative(state.time);
    if !n.is_finite() {
        return Err(Error::BlowUp { time: state.time });
    }
    Ok(n)
}
