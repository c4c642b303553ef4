//! Scaling exponents of homogeneous norms under `u ↦ λ^κ u(λ·)`, with
//! `κ = 3/2` for spinors and `κ = 1` for the scalar field.
//!
//! Rescaling is exact lattice re-indexing: the sample values are kept and
//! the period shrinks to `L/λ`, so the measured exponent must equal
//! `κ + s − 2/r`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{fourier_lebesgue_norm, zero_mode_fraction, NormSpec, ZERO_MODE_THRESHOLD};
use crate::report::EstimateReport;
use crate::spectral_grid::{Field, GridSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Spinor,
    KgField,
}

impl FieldKind {
    /// Amplitude exponent `κ`.
    pub fn amplitude(self) -> f64 {
        match self {
            FieldKind::Spinor => 1.5,
            FieldKind::KgField => 1.0,
        }
    }
}

/// Rescaling factors used by the fit.
pub const LAMBDAS: [f64; 3] = [2.0, 4.0, 8.0];

/// Tolerance on the fitted exponent.
pub const EXPONENT_TOLERANCE: f64 = 1e-2;

/// Mean-free Gaussian packet `∂ₓ₁ e^{−|x−c|²/w²}` (second component
/// `i ∂ₓ₂` of the same Gaussian for spinors).
fn packet<const C: usize>(grid: GridSpec) -> Field<C> {
    let l = grid.period;
    let w = l / 10.0;
    Field::<C>::from_fn(grid, move |_, x| {
        let (d1, d2) = (x[0] - l / 2.0, x[1] - l / 2.0);
        let g = (-(d1 * d1 + d2 * d2) / (w * w)).exp();
        std::array::from_fn(|c| {
            if c == 0 {
                Complex64::new(d1 * g, 0.0)
            } else {
                Complex64::new(0.0, d2 * g)
            }
        })
    })
}

fn norm_at<const C: usize>(base: &Field<C>, lambda: f64, kappa: f64, spec: &NormSpec) -> Result<f64> {
    let g = *base.grid();
    let grid = GridSpec::spatial(g.n_x, g.period / lambda)?;
    let f = base.clone().with_grid(grid)?.scaled(lambda.powf(kappa)).dft_forward()?;
    let z = zero_mode_fraction(&f)?;
    if z > ZERO_MODE_THRESHOLD {
        return Err(Error::Domain(format!(
            "zero-mode mass fraction {z:.3e} exceeds {ZERO_MODE_THRESHOLD:e}; homogeneous norm unusable"
        )));
    }
    fourier_lebesgue_norm(&f, spec)
}

/// Slope of `log y` against `log x`.
fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}

/// Measured exponent of `λ ↦ ‖u_λ(0)‖_{Ĥ^{s,r}}` (homogeneous) on an
/// `n_x`-point lattice, against `κ + s − 2/r`; `lhs` is measured, `rhs`
/// expected.
pub fn scaling_check(s: f64, r: f64, kind: FieldKind, n_x: usize) -> Result<EstimateReport> {
    let spec = NormSpec::sobolev(s, r).homogeneous();
    spec.validate()?;
    let grid = GridSpec::spatial(n_x, 2.0 * std::f64::consts::PI)?;
    let kappa = kind.amplitude();
    let norms: Vec<f64> = match kind {
        FieldKind::Spinor => {
            let base = packet::<2>(grid);
            LAMBDAS.iter().map(|&l| norm_at(&base, l, kappa, &spec)).collect::<Result<_>>()?
        }
        FieldKind::KgField => {
            let base = packet::<1>(grid);
            LAMBDAS.iter().map(|&l| norm_at(&base, l, kappa, &spec)).collect::<Result<_>>()?
        }
    };
    let measured = log_slope(&LAMBDAS, &norms);
    let expected = kappa + s - 2.0 / r;
    let mut report = EstimateReport::new("scaling", 0)
        .param("s", s)
        .param("r", r)
        .param("kind", serde_json::to_value(kind).expect("serializable"))
        .param("lambdas", LAMBDAS.to_vec())
        .param("norms", norms);
    report.grid = Some(grid);
    report.set_single(measured, expected);
    report.passed = Some((measured - expected).abs() < EXPONENT_TOLERANCE);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents_match_for_both_kinds() {
        for (s, r) in [(0.0, 2.0), (-0.5, 2.0), (0.625, 1.25)] {
            for kind in [FieldKind::Spinor, FieldKind::KgField] {
                let rep = scaling_check(s, r, kind, 64).unwrap();
                assert_eq!(rep.passed, Some(true), "{}", rep.to_json());
            }
        }
    }

    #[test]
    fn critical_regularity_is_invariant() {
        for r in [1.1, 1.5, 2.0] {
            let rep = scaling_check(2.0 / r - 1.5, r, FieldKind::Spinor, 32).unwrap();
            assert!(rep.lhs.unwrap().abs() < EXPONENT_TOLERANCE);
        }
    }

    #[test]
    fn slope_of_exact_power() {
        let xs = [2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.7)).collect();
        assert!((log_slope(&xs, &ys) + 0.7).abs() < 1e-12);
    }
}
