use std::fmt;

use num_complex::Complex64;
use rustfft::FftDirection;

use super::fft;
use super::grid::{Frequency, GridSpec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Representation {
    Physical,
    Fourier,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Physical => "physical",
            Representation::Fourier => "Fourier",
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Lattice function with `C` complex components per node.
///
/// Component buffers are stored separately, each row-major over `(t, x1, x2)`.
/// In Fourier representation the values are unitary DFT coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Field<const C: usize> {
    grid: GridSpec,
    rep: Representation,
    comps: [Vec<Complex64>; C],
}

/// Complex scalar lattice function (φ, φ±, or a space-time scalar).
pub type ScalarField = Field<1>;
/// Two-spinor lattice function (ψ, ψ±, or a space-time spinor).
pub type SpinorField = Field<2>;

impl<const C: usize> Field<C> {
    pub fn zeros(grid: GridSpec, rep: Representation) -> Self {
        Self {
            grid,
            rep,
            comps: std::array::from_fn(|_| vec![Complex64::default(); grid.len()]),
        }
    }

    pub fn from_components(
        grid: GridSpec,
        rep: Representation,
        comps: [Vec<Complex64>; C],
    ) -> Result<Self> {
        grid.validate()?;
        for (c, buf) in comps.iter().enumerate() {
            if buf.len() != grid.len() {
                return Err(Error::Grid(format!(
                    "component {c} has {} values, grid needs {}",
                    buf.len(),
                    grid.len()
                )));
            }
        }
        Ok(Self { grid, rep, comps })
    }

    /// Samples `f(t, x)` at every physical node.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, [f64; 2]) -> [Complex64; C]) -> Self {
        let mut out = Self::zeros(grid, Representation::Physical);
        for idx in 0..grid.len() {
            let (it, i1, i2) = grid.coords(idx);
            let v = f(grid.time(it), grid.position(i1, i2));
            for c in 0..C {
                out.comps[c][idx] = v[c];
            }
        }
        out
    }

    /// Fills Fourier coefficients from a function of the lattice frequency.
    pub fn from_spectrum(grid: GridSpec, f: impl Fn(Frequency) -> [Complex64; C]) -> Self {
        let mut out = Self::zeros(grid, Representation::Fourier);
        for idx in 0..grid.len() {
            let v = f(grid.frequency(idx));
            for c in 0..C {
                out.comps[c][idx] = v[c];
            }
        }
        out
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn rep(&self) -> Representation {
        self.rep
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.comps[c]
    }

    pub fn components(&self) -> &[Vec<Complex64>; C] {
        &self.comps
    }

    pub fn into_components(self) -> [Vec<Complex64>; C] {
        self.comps
    }

    pub fn value(&self, idx: usize) -> [Complex64; C] {
        std::array::from_fn(|c| self.comps[c][idx])
    }

    pub fn set_value(&mut self, idx: usize, v: [Complex64; C]) {
        for (c, x) in v.into_iter().enumerate() {
            self.comps[c][idx] = x;
        }
    }

    pub fn expect_rep(&self, expected: Representation) -> Result<()> {
        if self.rep != expected {
            return Err(Error::Representation {
                expected: expected.name(),
                found: self.rep.name(),
            });
        }
        Ok(())
    }

    pub fn check_same_grid<const D: usize>(&self, other: &Field<D>) -> Result<()> {
        if !self.grid.same_lattice(&other.grid) {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    /// Unitary forward DFT over all axes of the grid.
    pub fn dft_forward(mut self) -> Result<Self> {
        self.expect_rep(Representation::Physical)?;
        self.transform(FftDirection::Forward);
        self.rep = Representation::Fourier;
        Ok(self)
    }

    /// Unitary inverse DFT, the exact inverse of [`Field::dft_forward`].
    pub fn dft_inverse(mut self) -> Result<Self> {
        self.expect_rep(Representation::Fourier)?;
        self.transform(FftDirection::Inverse);
        self.rep = Representation::Physical;
        Ok(self)
    }

    fn transform(&mut self, direction: FftDirection) {
        let scale = 1.0 / (self.grid.len() as f64).sqrt();
        for buf in self.comps.iter_mut() {
            fft::transform(&self.grid, buf, direction);
            for v in buf.iter_mut() {
                *v *= scale;
            }
        }
    }

    /// Multiplies every Fourier coefficient by `symbol(τ, ξ)`.
    pub fn apply_multiplier(&mut self, symbol: impl Fn(Frequency) -> Complex64) -> Result<()> {
        self.expect_rep(Representation::Fourier)?;
        for idx in 0..self.grid.len() {
            let freq = self.grid.frequency(idx);
            let m = symbol(freq);
            if !(m.re.is_finite() && m.im.is_finite()) {
                return Err(Error::NonFiniteSymbol {
                    point: [freq.tau, freq.xi[0], freq.xi[1]],
                });
            }
            for buf in self.comps.iter_mut() {
                buf[idx] *= m;
            }
        }
        Ok(())
    }

    /// Real-valued multiplier convenience wrapper.
    pub fn apply_real_multiplier(&mut self, symbol: impl Fn(Frequency) -> f64) -> Result<()> {
        self.apply_multiplier(|f| Complex64::new(symbol(f), 0.0))
    }

    /// `Σ |f|²` over nodes and components.
    pub fn sum_sq(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|b| b.iter())
            .map(|v| v.norm_sqr())
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|b| b.iter())
            .fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Pointwise ℂ^C modulus at a flat index.
    pub fn modulus(&self, idx: usize) -> f64 {
        self.comps
            .iter()
            .map(|b| b[idx].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&mut self, a: Complex64) {
        for buf in self.comps.iter_mut() {
            for v in buf.iter_mut() {
                *v *= a;
            }
        }
    }

    pub fn scaled(mut self, a: f64) -> Self {
        self.scale(Complex64::new(a, 0.0));
        self
    }

    /// `self += a · other`.
    pub fn axpy(&mut self, a: Complex64, other: &Self) {
        debug_assert_eq!(self.rep, other.rep);
        for (dst, src) in self.comps.iter_mut().zip(other.comps.iter()) {
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                *d += a * s;
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(Complex64::new(1.0, 0.0), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), other);
        out
    }

    /// Relative ℓ² distance `‖self − other‖ / max(‖other‖, tiny)`.
    pub fn rel_distance(&self, other: &Self) -> f64 {
        let diff = self.sub(other).sum_sq().sqrt();
        let base = other.sum_sq().sqrt();
        if base > 0.0 {
            diff / base
        } else {
            diff
        }
    }

    /// Same values reinterpreted on another lattice with identical node counts.
    pub fn with_grid(mut self, grid: GridSpec) -> Result<Self> {
        grid.validate()?;
        if grid.n_x != self.grid.n_x || grid.n_t != self.grid.n_t {
            return Err(Error::GridMismatch(
                "relabelling requires identical node counts".into(),
            ));
        }
        self.grid = grid;
        Ok(self)
    }

    /// Zeroes every Fourier coefficient outside `keep`.
    pub fn mask(&mut self, keep: impl Fn(usize) -> bool) {
        for idx in 0..self.grid.len() {
            if !keep(idx) {
                for buf in self.comps.iter_mut() {
                    buf[idx] = Complex64::default();
                }
            }
        }
    }

    /// Spatial slice at time sample `it` of a space-time field.
    pub fn time_slice(&self, it: usize) -> Result<Field<C>> {
        if it >= self.grid.n_t {
            return Err(Error::Parameter(format!(
                "time slice {it} out of range for n_t = {}",
                self.grid.n_t
            )));
        }
        let grid = self.grid.spatial_part();
        let slice = grid.len();
        let comps = std::array::from_fn(|c| self.comps[c][it * slice..(it + 1) * slice].to_vec());
        Ok(Field {
            grid,
            rep: self.rep,
            comps,
        })
    }

    /// Stacks equally sized spatial fields into a space-time field over
    /// `[0, window)`.
    pub fn stack(slices: &[Field<C>], window: f64) -> Result<Field<C>> {
        let first = slices
            .first()
            .ok_or_else(|| Error::Parameter("cannot stack zero slices".into()))?;
        let spatial = first.grid.spatial_part();
        let grid = GridSpec::space_time(spatial.n_x, spatial.period, slices.len(), window)?;
        let mut comps: [Vec<Complex64>; C] =
            std::array::from_fn(|_| Vec::with_capacity(grid.len()));
        for s in slices {
            if s.grid.is_space_time() || !s.grid.same_lattice(&spatial) || s.rep != first.rep {
                return Err(Error::GridMismatch("slices must share one spatial lattice".into()));
            }
            for c in 0..C {
                comps[c].extend_from_slice(&s.comps[c]);
            }
        }
        Ok(Field {
            grid,
            rep: first.rep,
            comps,
        })
    }
}

impl ScalarField {
    /// Max deviation from `f̂(−ξ) = conj f̂(ξ)` (Fourier representation).
    pub fn hermitian_defect(&self) -> Result<f64> {
        self.expect_rep(Representation::Fourier)?;
        let g = self.grid;
        let buf = &self.comps[0];
        let mut worst: f64 = 0.0;
        for idx in 0..g.len() {
            let (it, i1, i2) = g.coords(idx);
            let mirror = g.index(
                (g.n_t - it) % g.n_t,
                (g.n_x - i1) % g.n_x,
                (g.n_x - i2) % g.n_x,
            );
            worst = worst.max((buf[idx] - buf[mirror].conj()).norm());
        }
        Ok(worst)
    }

    /// Largest imaginary part relative to the largest modulus (physical).
    pub fn imaginary_residue(&self) -> Result<f64> {
        self.expect_rep(Representation::Physical)?;
        let max_im = self.comps[0].iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
        let max_abs = self.max_abs();
        Ok(if max_abs > 0.0 { max_im / max_abs } else { 0.0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_grid::slot_of;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn constant_field_has_single_dc_coefficient() {
        let g = GridSpec::spatial(8, 1.0).unwrap();
        let f = ScalarField::from_fn(g, |_, _| [c(1.0)]).dft_forward().unwrap();
        assert!((f.component(0)[0] - c(8.0)).norm() < 1e-12);
        let rest: f64 = f.component(0)[1..].iter().map(|v| v.norm()).sum();
        assert!(rest < 1e-12);
    }

    #[test]
    fn pure_mode_lands_on_its_lattice_point() {
        let g = GridSpec::spatial(8, 2.0 * PI).unwrap();
        let (k1, k2) = (3i64, -2i64);
        let f = ScalarField::from_fn(g, |_, x| {
            [Complex64::from_polar(1.0, k1 as f64 * x[0] + k2 as f64 * x[1])]
        })
        .dft_forward()
        .unwrap();
        let idx = g.index(0, slot_of(k1, 8).unwrap(), slot_of(k2, 8).unwrap());
        for (i, v) in f.component(0).iter().enumerate() {
            let expected = if i == idx { 8.0 } else { 0.0 };
            assert!((v.norm() - expected).abs() < 1e-12, "slot {i}: {v}");
        }
    }

    #[test]
    fn inverse_of_zero_is_zero_and_single_coefficient_is_a_plane_wave() {
        let g = GridSpec::spatial(8, 2.0 * PI).unwrap();
        let z = ScalarField::zeros(g, Representation::Fourier).dft_inverse().unwrap();
        assert_eq!(z.max_abs(), 0.0);

        let mut f = ScalarField::zeros(g, Representation::Fourier);
        let idx = g.index(0, 1, 7);
        f.component_mut(0)[idx] = c(1.0);
        let p = f.dft_inverse().unwrap();
        for i1 in 0..8 {
            for i2 in 0..8 {
                let x = g.position(i1, i2);
                let expect = Complex64::from_polar(1.0 / 8.0, x[0] - x[1]);
                assert!((p.component(0)[g.index(0, i1, i2)] - expect).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn representation_contract_is_enforced() {
        let g = GridSpec::spatial(8, 1.0).unwrap();
        let f = ScalarField::zeros(g, Representation::Fourier);
        assert!(matches!(f.clone().dft_forward(), Err(Error::Representation { .. })));
        let p = ScalarField::zeros(g, Representation::Physical);
        assert!(p.clone().dft_inverse().is_err());
        let mut p = p;
        assert!(p.apply_real_multiplier(|_| 1.0).is_err());
    }

    #[test]
    fn multiplier_errors_name_the_lattice_point() {
        let g = GridSpec::spatial(8, 2.0 * PI).unwrap();
        let mut f = ScalarField::zeros(g, Representation::Fourier);
        let err = f
            .apply_real_multiplier(|fr| 1.0 / fr.abs_xi())
            .unwrap_err();
        match err {
            Error::NonFiniteSymbol { point } => assert_eq!(point, [0.0, 0.0, 0.0]),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn stack_and_slice_round_trip() {
        let g = GridSpec::spatial(8, 1.0).unwrap();
        let a = ScalarField::from_fn(g, |_, x| [c(x[0])]);
        let b = ScalarField::from_fn(g, |_, x| [c(x[1])]);
        let st = ScalarField::stack(&[a.clone(), b.clone()], 1.0).unwrap();
        assert_eq!(st.grid().n_t, 2);
        assert_eq!(st.time_slice(1).unwrap(), b);
        assert_eq!(st.time_slice(0).unwrap(), a);
    }
}
