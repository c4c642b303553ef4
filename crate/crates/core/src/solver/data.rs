use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{complex_gaussian, seeded};
use crate::spectral_grid::{japanese, slot_of, GridSpec, Representation, ScalarField, SpinorField};

/// Built-in initial data families. Every family yields real `φ₀`, `φ₁`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum InitialData {
    Zero,
    /// Gaussians of width `width` centred in the box.
    Gaussian {
        psi: [f64; 2],
        phi: f64,
        #[serde(default)]
        dt_phi: f64,
        width: f64,
    },
    /// `ψ₀ = psi·e^{ik·x}`, `φ₀ = phi·cos(k·x)` for a lattice wave vector.
    SingleMode { k: [i64; 2], psi: [f64; 2], phi: f64 },
    /// Random coefficients with spectrum `⟨ξ⟩^{−decay}`, rescaled so the
    /// largest physical value of `ψ₀` and `φ₀` equals `amplitude`.
    RandomSpectrum { decay: f64, amplitude: f64 },
}

pub type DataTriple = (SpinorField, ScalarField, ScalarField);

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl InitialData {
    /// Samples `(ψ₀, φ₀, φ₁)` in physical representation.
    pub fn build(&self, grid: GridSpec, seed: u64) -> Result<DataTriple> {
        grid.validate()?;
        let l = grid.period;
        match *self {
            InitialData::Zero => Ok((
                SpinorField::zeros(grid, Representation::Physical),
                ScalarField::zeros(grid, Representation::Physical),
                ScalarField::zeros(grid, Representation::Physical),
            )),
            InitialData::Gaussian {
                psi,
                phi,
                dt_phi,
                width,
            } => {
                if !(width > 0.0) {
                    return Err(Error::Parameter("Gaussian width must be positive".into()));
                }
                let g = move |x: [f64; 2]| {
                    let (a, b) = (x[0] - l / 2.0, x[1] - l / 2.0);
                    (-(a * a + b * b) / (width * width)).exp()
                };
                Ok((
                    SpinorField::from_fn(grid, |_, x| [real(psi[0] * g(x)), Complex64::new(0.0, psi[1] * g(x))]),
                    ScalarField::from_fn(grid, |_, x| [real(phi * g(x))]),
                    ScalarField::from_fn(grid, |_, x| [real(dt_phi * g(x))]),
                ))
            }
            InitialData::SingleMode { k, psi, phi } => {
                for kj in k {
                    if slot_of(kj, grid.n_x).is_none() {
                        return Err(Error::Parameter(format!("wave number {kj} is not on the lattice")));
                    }
                }
                let dk = grid.dk();
                let phase = move |x: [f64; 2]| dk * (k[0] as f64 * x[0] + k[1] as f64 * x[1]);
                Ok((
                    SpinorField::from_fn(grid, |_, x| {
                        let e = Complex64::from_polar(1.0, phase(x));
                        [e * psi[0], e * psi[1]]
                    }),
                    ScalarField::from_fn(grid, |_, x| [real(phi * phase(x).cos())]),
                    ScalarField::zeros(grid, Representation::Physical),
                ))
            }
            InitialData::RandomSpectrum { decay, amplitude } => {
                let mut rng = seeded(seed);
                let mut psi = SpinorField::zeros(grid, Representation::Fourier);
                let mut phi = ScalarField::zeros(grid, Representation::Fourier);
                for idx in 0..grid.len() {
                    let w = japanese(grid.frequency(idx).abs_xi()).powf(-decay);
                    psi.set_value(idx, [complex_gaussian(&mut rng) * w, complex_gaussian(&mut rng) * w]);
                    phi.component_mut(0)[idx] = complex_gaussian(&mut rng) * w;
                }
                let psi = psi.dft_inverse()?;
                let mut phi = phi.dft_inverse()?;
                for v in phi.component_mut(0) {
                    *v = real(v.re);
                }
                let (mp, mf) = (psi.max_abs(), phi.max_abs());
                let psi = if mp > 0.0 { psi.scaled(amplitude / mp) } else { psi };
                let phi = if mf > 0.0 { phi.scaled(amplitude / mf) } else { phi };
                Ok((psi, phi, ScalarField::zeros(grid, Representation::Physical)))
            }
        }
    }
}
