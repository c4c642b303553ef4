use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic lattice over `[0, period)^2`, optionally extended by `n_t` time
/// samples over the window `[0, window)`.
///
/// Axis frequencies are `2πk/period` for `k = −n/2 … n/2 − 1`; the time axis
/// uses `2πk/window` with the same index convention (for odd `n_t` the range is
/// symmetric). Values are stored in FFT order along each axis, so index `i`
/// carries frequency index `k = i` for `i < ⌈n/2⌉` and `k = i − n` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_x: usize,
    pub period: f64,
    pub n_t: usize,
    pub window: f64,
}

impl GridSpec {
    /// Spatial-only lattice (`n_t = 1`, `window = 0`).
    pub fn spatial(n_x: usize, period: f64) -> Result<Self> {
        let grid = Self {
            n_x,
            period,
            n_t: 1,
            window: 0.0,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn space_time(n_x: usize, period: f64, n_t: usize, window: f64) -> Result<Self> {
        let grid = Self {
            n_x,
            period,
            n_t,
            window,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_x < 8 || self.n_x % 2 != 0 {
            return Err(Error::Grid(format!(
                "n_x must be even and at least 8, got {}",
                self.n_x
            )));
        }
        if !(self.period.is_finite() && self.period > 0.0) {
            return Err(Error::Grid(format!("period must be positive, got {}", self.period)));
        }
        if self.n_t == 0 {
            return Err(Error::Grid("n_t must be at least 1".into()));
        }
        if self.n_t > 1 && !(self.window.is_finite() && self.window > 0.0) {
            return Err(Error::Grid(format!(
                "window must be positive for space-time grids, got {}",
                self.window
            )));
        }
        Ok(())
    }

    pub fn is_space_time(&self) -> bool {
        self.n_t > 1
    }

    /// The spatial slice of this grid.
    pub fn spatial_part(&self) -> Self {
        Self {
            n_x: self.n_x,
            period: self.period,
            n_t: 1,
            window: 0.0,
        }
    }

    pub fn nodes_per_slice(&self) -> usize {
        self.n_x * self.n_x
    }

    pub fn len(&self) -> usize {
        self.n_t * self.n_x * self.n_x
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        self.period / self.n_x as f64
    }

    pub fn dt(&self) -> f64 {
        if self.n_t > 1 {
            self.window / self.n_t as f64
        } else {
            0.0
        }
    }

    /// Spacing of the spatial frequency lattice.
    pub fn dk(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Spacing of the temporal frequency lattice.
    pub fn dtau(&self) -> f64 {
        if self.n_t > 1 {
            2.0 * PI / self.window
        } else {
            0.0
        }
    }

    /// Fourier-space cell measure: `Δξ²` for spatial grids, `Δτ·Δξ²` for
    /// space-time grids.
    pub fn fourier_measure(&self) -> f64 {
        let dxi2 = self.dk() * self.dk();
        if self.is_space_time() {
            dxi2 * self.dtau()
        } else {
            dxi2
        }
    }

    /// Physical cell measure (`Δx²`, times `Δt` on space-time grids).
    pub fn physical_measure(&self) -> f64 {
        let dx2 = self.dx() * self.dx();
        if self.is_space_time() {
            dx2 * self.dt()
        } else {
            dx2
        }
    }

    /// Factor mapping unitary DFT coefficients to samples of the continuum
    /// Fourier transform `∫ e^{−i(tτ + x·ξ)} f`.
    pub fn continuum_scale(&self) -> f64 {
        let space = self.dx() * self.dx() * self.n_x as f64;
        if self.is_space_time() {
            space * self.dt() * (self.n_t as f64).sqrt()
        } else {
            space
        }
    }

    pub fn index(&self, it: usize, i1: usize, i2: usize) -> usize {
        (it * self.n_x + i1) * self.n_x + i2
    }

    /// Inverse of [`GridSpec::index`].
    pub fn coords(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.n_x;
        (idx / (n * n), (idx / n) % n, idx % n)
    }

    pub fn xi(&self, i1: usize, i2: usize) -> [f64; 2] {
        let dk = self.dk();
        [
            dk * freq_index(i1, self.n_x) as f64,
            dk * freq_index(i2, self.n_x) as f64,
        ]
    }

    pub fn tau(&self, it: usize) -> f64 {
        if self.n_t > 1 {
            self.dtau() * freq_index(it, self.n_t) as f64
        } else {
            0.0
        }
    }

    /// Frequency `(τ, ξ)` at a flat storage index.
    pub fn frequency(&self, idx: usize) -> Frequency {
        let (it, i1, i2) = self.coords(idx);
        Frequency {
            tau: self.tau(it),
            xi: self.xi(i1, i2),
        }
    }

    /// Signed frequency indices `(k_t, k_1, k_2)` at a flat storage index.
    pub fn wave_numbers(&self, idx: usize) -> (i64, i64, i64) {
        let (it, i1, i2) = self.coords(idx);
        (
            freq_index(it, self.n_t),
            freq_index(i1, self.n_x),
            freq_index(i2, self.n_x),
        )
    }

    /// Physical position of spatial node `(i1, i2)`.
    pub fn position(&self, i1: usize, i2: usize) -> [f64; 2] {
        [self.dx() * i1 as f64, self.dx() * i2 as f64]
    }

    pub fn time(&self, it: usize) -> f64 {
        self.dt() * it as f64
    }

    pub fn same_lattice(&self, other: &Self) -> bool {
        self.n_x == other.n_x
            && self.n_t == other.n_t
            && self.period == other.period
            && self.window == other.window
    }
}

/// A point of the (space-)time frequency lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frequency {
    pub tau: f64,
    pub xi: [f64; 2],
}

impl Frequency {
    pub fn abs_xi(&self) -> f64 {
        self.xi[0].hypot(self.xi[1])
    }
}

/// Signed frequency index of FFT slot `i` on an axis of length `n`.
pub fn freq_index(i: usize, n: usize) -> i64 {
    let half = n.div_ceil(2);
    if i < half {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// FFT slot of signed frequency index `k`, if it lies on an axis of length `n`.
pub fn slot_of(k: i64, n: usize) -> Option<usize> {
    let n_i = n as i64;
    let lo = -(n_i / 2);
    let hi = (n_i - 1) / 2;
    if k < lo || k > hi {
        return None;
    }
    Some(k.rem_euclid(n_i) as usize)
}

/// `⟨x⟩ = (1 + x²)^{1/2}`.
pub fn japanese(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_or_small_spatial_resolution() {
        assert!(GridSpec::spatial(6, 1.0).is_err());
        assert!(GridSpec::spatial(9, 1.0).is_err());
        assert!(GridSpec::spatial(8, 0.0).is_err());
        assert!(GridSpec::space_time(8, 1.0, 4, 0.0).is_err());
        assert!(GridSpec::space_time(8, 1.0, 5, 1.0).is_ok());
    }

    #[test]
    fn frequency_indexing_round_trips() {
        for n in [8usize, 9, 16] {
            for i in 0..n {
                let k = freq_index(i, n);
                assert_eq!(slot_of(k, n), Some(i));
            }
        }
        assert_eq!(freq_index(4, 8), -4);
        assert_eq!(freq_index(3, 8), 3);
        assert_eq!(slot_of(4, 8), None);
        assert_eq!(slot_of(-4, 8), Some(4));
    }

    #[test]
    fn lattice_measures() {
        let g = GridSpec::space_time(8, 2.0 * PI, 4, 4.0 * PI).unwrap();
        assert!((g.dk() - 1.0).abs() < 1e-15);
        assert!((g.dtau() - 0.5).abs() < 1e-15);
        assert!((g.fourier_measure() - 0.5).abs() < 1e-15);
        let idx = g.index(3, 5, 1);
        assert_eq!(g.coords(idx), (3, 5, 1));
        let f = g.frequency(idx);
        assert_eq!(f.xi, [-3.0, 1.0]);
        assert_eq!(f.tau, -0.5);
    }
}
