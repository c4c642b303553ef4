//! Random band-limited lattice fields shaped to sit in a given `X^r_{s,b}`
//! space, and the spinor bilinear form used by the estimates.
//!
//! Inputs are supported on `|k| ≤ (n − 2)/4` along every axis, so products
//! of two inputs are computed exactly by the FFT (no wrap-around).

use num_complex::Complex64;
use rand::Rng;

use crate::dirac_algebra::{beta, projection, Sign, SignPair};
use crate::error::{Error, Result};
use crate::norms::{xsb_norm, NormSpec};
use crate::rng::complex_gaussian;
use crate::spectral_grid::{Field, GridSpec, Representation, ScalarField, SpinorField};

/// Largest frequency index kept on an axis of length `n`.
pub fn band(n: usize) -> i64 {
    (n as i64 - 2) / 4
}

/// Whether flat index `idx` lies in the band on every axis.
pub fn in_band(grid: &GridSpec, idx: usize) -> bool {
    let (kt, k1, k2) = grid.wave_numbers(idx);
    let (bs, bt) = (band(grid.n_x), band(grid.n_t));
    k1.abs() <= bs && k2.abs() <= bs && kt.abs() <= bt
}

/// Complex Gaussian Fourier coefficients on the band, zero elsewhere.
pub fn gaussian<const C: usize>(grid: GridSpec, rng: &mut impl Rng) -> Field<C> {
    let mut f = Field::<C>::zeros(grid, Representation::Fourier);
    for idx in 0..grid.len() {
        if in_band(&grid, idx) {
            let v: [Complex64; C] = std::array::from_fn(|_| complex_gaussian(rng));
            f.set_value(idx, v);
        }
    }
    f
}

/// Divides by the weight of `spec` and rescales to unit `spec` norm.
pub fn shape<const C: usize>(raw: &Field<C>, spec: &NormSpec) -> Result<Field<C>> {
    let mut f = raw.clone();
    f.apply_real_multiplier(|fr| spec.weight(fr).map_or(0.0, |w| 1.0 / w))?;
    let n = xsb_norm(&f, spec)?;
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::Domain("shaped field has zero norm".into()));
    }
    Ok(f.scaled(1.0 / n))
}

/// `M(ξ) ψ̂(τ, ξ)` for a spatial-frequency matrix symbol.
fn apply_matrix(psi: &SpinorField, m: impl Fn([f64; 2]) -> crate::dirac_algebra::Mat2) -> SpinorField {
    let grid = *psi.grid();
    let mut out = psi.clone();
    for idx in 0..grid.len() {
        let mat = m(grid.frequency(idx).xi);
        out.set_value(idx, mat.apply(psi.value(idx)));
    }
    out
}

/// `β Π_{±}(D) ψ` in physical space.
pub fn beta_projected(psi: &SpinorField, sign: Sign) -> Result<SpinorField> {
    psi.expect_rep(Representation::Fourier)?;
    let b = beta();
    apply_matrix(psi, |xi| b * projection(xi, sign)).dft_inverse()
}

/// `Π_{±}(D) ψ` in physical space.
pub fn projected(psi: &SpinorField, sign: Sign) -> Result<SpinorField> {
    psi.expect_rep(Representation::Fourier)?;
    apply_matrix(psi, |xi| projection(xi, sign)).dft_inverse()
}

/// Pointwise `⟨a, b⟩ = a₀ b̄₀ + a₁ b̄₁` of two physical spinors, transformed to
/// Fourier space.
pub fn pair(a: &SpinorField, b: &SpinorField) -> Result<ScalarField> {
    a.expect_rep(Representation::Physical)?;
    b.expect_rep(Representation::Physical)?;
    a.check_same_grid(b)?;
    let grid = *a.grid();
    let (a0, a1, b0, b1) = (a.component(0), a.component(1), b.component(0), b.component(1));
    let vals: Vec<Complex64> = (0..grid.len())
        .map(|i| a0[i] * b0[i].conj() + a1[i] * b1[i].conj())
        .collect();
    ScalarField::from_components(grid, Representation::Physical, [vals])?.dft_forward()
}

/// `⟨β Π_{±₁} ψ, Π_{±₂} ψ′⟩` in Fourier space.
pub fn dirac_bilinear(psi: &SpinorField, psi2: &SpinorField, signs: SignPair) -> Result<ScalarField> {
    pair(&beta_projected(psi, signs.s1)?, &projected(psi2, signs.s2)?)
}

/// Pointwise product `u v` of two Fourier scalars, returned in Fourier space.
pub fn product(u: &ScalarField, v: &ScalarField) -> Result<ScalarField> {
    u.check_same_grid(v)?;
    let pu = u.clone().dft_inverse()?;
    let pv = v.clone().dft_inverse()?;
    let vals: Vec<Complex64> = pu
        .component(0)
        .iter()
        .zip(pv.component(0))
        .map(|(a, b)| a * b)
        .collect();
    ScalarField::from_components(*u.grid(), Representation::Physical, [vals])?.dft_forward()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::Branch;
    use crate::rng::seeded;
    use crate::spectral_grid::slot_of;
    use std::f64::consts::PI;

    fn grid() -> GridSpec {
        GridSpec::space_time(16, 2.0 * PI, 16, 2.0 * PI).unwrap()
    }

    #[test]
    fn shaped_field_has_unit_norm_and_band_support() {
        let g = grid();
        let raw: SpinorField = gaussian(g, &mut seeded(2));
        let spec = NormSpec::xsb(0.3, 0.6, 1.5, Branch::Plus);
        let f = shape(&raw, &spec).unwrap();
        assert!((xsb_norm(&f, &spec).unwrap() - 1.0).abs() < 1e-12);
        for idx in 0..g.len() {
            if !in_band(&g, idx) {
                assert_eq!(f.modulus(idx), 0.0);
            }
        }
    }

    #[test]
    fn product_matches_direct_convolution() {
        let g = GridSpec::space_time(8, 2.0 * PI, 8, 2.0 * PI).unwrap();
        let mut rng = seeded(5);
        let u: ScalarField = gaussian(g, &mut rng);
        let v: ScalarField = gaussian(g, &mut rng);
        let p = product(&u, &v).unwrap();
        // Unitary coefficients: P_k = N^{-1/2} Σ_j U_j V_{k−j}.
        let norm = (g.len() as f64).sqrt();
        let mut direct = vec![Complex64::default(); g.len()];
        for i in 0..g.len() {
            let (at, a1, a2) = g.wave_numbers(i);
            for j in 0..g.len() {
                let (bt, b1, b2) = g.wave_numbers(j);
                let slots = (slot_of(at + bt, g.n_t), slot_of(a1 + b1, g.n_x), slot_of(a2 + b2, g.n_x));
                if let (Some(t), Some(x), Some(y)) = slots {
                    direct[g.index(t, x, y)] += u.component(0)[i] * v.component(0)[j] / norm;
                }
            }
        }
        for (a, b) in p.component(0).iter().zip(&direct) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn bilinear_with_identity_projections_sums_to_beta_pairing() {
        // Π₊ + Π₋ = I, so the four sign pairs add up to ⟨βψ, ψ′⟩.
        let g = grid();
        let mut rng = seeded(8);
        let psi: SpinorField = gaussian(g, &mut rng);
        let psi2: SpinorField = gaussian(g, &mut rng);
        let mut total = ScalarField::zeros(g, Representation::Fourier);
        for signs in SignPair::ALL {
            total.axpy(Complex64::new(1.0, 0.0), &dirac_bilinear(&psi, &psi2, signs).unwrap());
        }
        let bpsi = apply_matrix(&psi, |_| beta()).dft_inverse().unwrap();
        let direct = pair(&bpsi, &psi2.clone().dft_inverse().unwrap()).unwrap();
        assert!(total.rel_distance(&direct) < 1e-12);
    }
}
