use num_complex::Complex64;

use super::{project, to_fourier, DKGState};
use crate::dirac_algebra::Sign;
use crate::error::Result;
use crate::spectral_grid::{symbols, ScalarField, SpinorField};

/// `ψ±(0) = Π±(D)ψ₀`, `φ±(0) = φ₀ ± iA^{−1/2}φ₁`. Inputs may be in either
/// representation; the state is returned in Fourier space at `t = 0`.
pub fn split_data(psi0: &SpinorField, phi0: &ScalarField, phi1: &ScalarField) -> Result<DKGState> {
    psi0.check_same_grid(phi0)?;
    phi0.check_same_grid(phi1)?;
    let psi = to_fourier(psi0)?;
    let phi = to_fourier(phi0)?;
    let mut w = to_fourier(phi1)?;
    w.apply_real_multiplier(symbols::a_power(-0.5))?;
    w.scale(Complex64::new(0.0, 1.0));
    Ok(DKGState {
        psi_plus: project(&psi, Sign::Plus)?,
        psi_minus: project(&psi, Sign::Minus)?,
        phi_plus: phi.add(&w),
        phi_minus: phi.sub(&w),
        time: 0.0,
    })
}

/// Physical-space `(ψ, φ, ∂ₜφ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reassembled {
    pub psi: SpinorField,
    pub phi: ScalarField,
    pub dt_phi: ScalarField,
}

/// `ψ = ψ₊ + ψ₋`, `φ = ½(φ₊ + φ₋)`, `∂ₜφ = (1/2i)A^{1/2}(φ₊ − φ₋)`.
pub fn reassemble(state: &DKGState) -> Result<Reassembled> {
    let psi = state.psi_plus.add(&state.psi_minus);
    let phi = state.phi_plus.add(&state.phi_minus).scaled(0.5);
    let mut dt_phi = state.phi_plus.sub(&state.phi_minus);
    dt_phi.apply_real_multiplier(symbols::a_power(0.5))?;
    dt_phi.scale(Complex64::new(0.0, -0.5));
    Ok(Reassembled {
        psi: psi.dft_inverse()?,
        phi: phi.dft_inverse()?,
        dt_phi: dt_phi.dft_inverse()?,
    })
}
