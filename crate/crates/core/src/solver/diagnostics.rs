use num_complex::Complex64;

use super::{project, DKGState, PhysicsParams};
use crate::dirac_algebra::{dirac_symbol, Sign};
use crate::error::{Error, Result};
use crate::spectral_grid::{Field, Representation, ScalarField, SpinorField};

/// `‖ψ₊ + ψ₋‖_{L²}` with the lattice measure (Fourier-space inputs).
pub fn charge(psi_plus: &SpinorField, psi_minus: &SpinorField) -> Result<f64> {
    psi_plus.check_same_grid(psi_minus)?;
    let dx = psi_plus.grid().dx();
    Ok((dx * dx * psi_plus.add(psi_minus).sum_sq()).sqrt())
}

/// Largest relative mass of `Π∓ψ±` over the two halves, zero mode excluded.
pub fn projection_leakage(state: &DKGState) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (psi, wrong) in [(&state.psi_plus, Sign::Minus), (&state.psi_minus, Sign::Plus)] {
        let mut leak = project(psi, wrong)?;
        leak.mask(|i| i != 0);
        let mut base = psi.clone();
        base.mask(|i| i != 0);
        let total = base.sum_sq();
        if total > 0.0 {
            worst = worst.max((leak.sum_sq() / total).sqrt());
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residuals {
    pub dirac: f64,
    pub kg: f64,
}

fn spatial_fourier<const C: usize>(f: &Field<C>, it: usize) -> Result<Field<C>> {
    f.time_slice(it)?.dft_forward()
}

/// Residuals of the original system on a physical space-time trajectory with
/// uniformly spaced samples `t_k = k·Δt`:
///
/// ```text
/// i(∂ₜ + α·∇)ψ + Mβψ + cφβψ
/// (−∂ₜ² + Δ)φ + mφ + c⟨βψ,ψ⟩
/// ```
///
/// Space derivatives are spectral, time derivatives centred second-order
/// differences; the returned values are space-time `L²` norms over the
/// interior samples.
pub fn residual_original(psi: &SpinorField, phi: &ScalarField, params: &PhysicsParams) -> Result<Residuals> {
    psi.check_same_grid(phi)?;
    psi.expect_rep(Representation::Physical)?;
    phi.expect_rep(Representation::Physical)?;
    let grid = *psi.grid();
    if grid.n_t < 5 {
        return Err(Error::Parameter(format!(
            "residual needs at least 5 time samples, got {}",
            grid.n_t
        )));
    }
    let h = grid.dt();
    let spatial = grid.spatial_part();
    let i = Complex64::new(0.0, 1.0);
    let (mut rd, mut rk) = (0.0, 0.0);
    for it in 1..grid.n_t - 1 {
        let (pm, p0, pp) = (psi.time_slice(it - 1)?, psi.time_slice(it)?, psi.time_slice(it + 1)?);
        let (fm, f0, fp) = (phi.time_slice(it - 1)?, phi.time_slice(it)?, phi.time_slice(it + 1)?);

        // i α·∇ψ = −(ξ·α)ψ̂ and Δφ = −|ξ|²φ̂.
        let hat = spatial_fourier(psi, it)?;
        let mut grad = SpinorField::zeros(spatial, Representation::Fourier);
        for idx in 0..spatial.len() {
            let m = dirac_symbol(spatial.frequency(idx).xi);
            let v = m.apply(hat.value(idx));
            grad.set_value(idx, [-v[0], -v[1]]);
        }
        let grad = grad.dft_inverse()?;
        let mut lap = spatial_fourier(phi, it)?;
        lap.apply_real_multiplier(|f| -(f.xi[0] * f.xi[0] + f.xi[1] * f.xi[1]))?;
        let lap = lap.dft_inverse()?;

        for idx in 0..spatial.len() {
            let [a, b] = p0.value(idx);
            let f = f0.component(0)[idx];
            let dpsi = [
                (pp.component(0)[idx] - pm.component(0)[idx]) / (2.0 * h),
                (pp.component(1)[idx] - pm.component(1)[idx]) / (2.0 * h),
            ];
            let g = grad.value(idx);
            let w = params.dirac_mass + params.coupling * f;
            let r = [i * dpsi[0] + g[0] + w * a, i * dpsi[1] + g[1] - w * b];
            rd += r[0].norm_sqr() + r[1].norm_sqr();

            let dtt = (fp.component(0)[idx] - 2.0 * f + fm.component(0)[idx]) / (h * h);
            let rho = a.norm_sqr() - b.norm_sqr();
            let rkg = -dtt + lap.component(0)[idx] + params.kg_mass * f + params.coupling * rho;
            rk += rkg.norm_sqr();
        }
    }
    let measure = spatial.physical_measure() * h;
    Ok(Residuals {
        dirac: (rd * measure).sqrt(),
        kg: (rk * measure).sqrt(),
    })
}

