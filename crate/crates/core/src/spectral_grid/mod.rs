//! Periodic space and space-time lattices, unitary DFTs and Fourier multipliers.

mod fft;
mod field;
mod grid;
pub mod io;

pub use field::{Field, Representation, ScalarField, SpinorField};
pub use grid::{freq_index, japanese, slot_of, Frequency, GridSpec};

/// Common Fourier symbols.
pub mod symbols {
    use super::{japanese, Frequency};

    /// `⟨ξ⟩^s`.
    pub fn bracket_xi(s: f64) -> impl Fn(Frequency) -> f64 {
        move |f| japanese(f.abs_xi()).powf(s)
    }

    /// `A^p` with `A = −Δ + 1`, i.e. `(1 + |ξ|²)^p`.
    pub fn a_power(p: f64) -> impl Fn(Frequency) -> f64 {
        move |f| (1.0 + f.xi[0] * f.xi[0] + f.xi[1] * f.xi[1]).powf(p)
    }

    /// `|ξ|`.
    pub fn abs_xi(f: Frequency) -> f64 {
        f.abs_xi()
    }

    /// `⟨τ + sign·|ξ|⟩`.
    pub fn modulation(sign: f64) -> impl Fn(Frequency) -> f64 {
        move |f| japanese(f.tau + sign * f.abs_xi())
    }

    /// `⟨|τ| − |ξ|⟩`.
    pub fn wave_modulation(f: Frequency) -> f64 {
        japanese(f.tau.abs() - f.abs_xi())
    }
}

/// 2/3-rule mask: keeps modes with `|k_j| ≤ (n − 1)/3` on every spatial axis.
pub fn two_thirds_mask(grid: &GridSpec) -> impl Fn(usize) -> bool + '_ {
    let cut = ((grid.n_x - 1) / 3) as i64;
    move |idx| {
        let (_, k1, k2) = grid.wave_numbers(idx);
        k1.abs() <= cut && k2.abs() <= cut
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    /// Unitary DFT by direct summation, O(N²).
    fn direct_dft(grid: &GridSpec, data: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = grid.len();
        let norm = 1.0 / (n as f64).sqrt();
        (0..n)
            .map(|k| {
                let (kt, k1, k2) = grid.coords(k);
                let mut acc = Complex64::default();
                for (j, v) in data.iter().enumerate() {
                    let (jt, j1, j2) = grid.coords(j);
                    let phase = 2.0
                        * PI
                        * ((kt * jt) as f64 / grid.n_t as f64
                            + (k1 * j1) as f64 / grid.n_x as f64
                            + (k2 * j2) as f64 / grid.n_x as f64);
                    acc += v * Complex64::from_polar(1.0, sign * phase);
                }
                acc * norm
            })
            .collect()
    }

    fn random_field<const C: usize>(grid: GridSpec, seed: u64) -> Field<C> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let comps = std::array::from_fn(|_| {
            (0..grid.len())
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        });
        Field::from_components(grid, Representation::Physical, comps).unwrap()
    }

    #[test]
    fn fft_matches_direct_summation_oracle() {
        for grid in [
            GridSpec::spatial(8, 1.3).unwrap(),
            GridSpec::space_time(8, 2.0, 6, 0.7).unwrap(),
            GridSpec::space_time(10, 2.0, 5, 0.7).unwrap(),
        ] {
            let f: SpinorField = random_field(grid, 7);
            let fast = f.clone().dft_forward().unwrap();
            for c in 0..2 {
                let slow = direct_dft(&grid, f.component(c), -1.0);
                let err = fast
                    .component(c)
                    .iter()
                    .zip(&slow)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                assert!(err < 1e-12, "forward mismatch {err}");
                let back = direct_dft(&grid, &slow, 1.0);
                let err = back
                    .iter()
                    .zip(f.component(c))
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                assert!(err < 1e-12, "inverse oracle mismatch {err}");
            }
        }
    }

    #[test]
    fn inverse_matches_direct_summation_and_parseval() {
        let grid = GridSpec::spatial(8, 1.0).unwrap();
        let mut coeffs: ScalarField = random_field(grid, 11);
        let comps = coeffs.clone().into_components();
        coeffs = Field::from_components(grid, Representation::Fourier, comps).unwrap();
        let phys = coeffs.clone().dft_inverse().unwrap();
        let slow = direct_dft(&grid, coeffs.component(0), 1.0);
        for (a, b) in phys.component(0).iter().zip(&slow) {
            assert!((a - b).norm() < 1e-12);
        }
        let rel = (phys.sum_sq() - coeffs.sum_sq()).abs() / coeffs.sum_sq();
        assert!(rel < 1e-12);
    }

    #[test]
    fn bracket_multiplier_scales_a_single_mode() {
        let grid = GridSpec::spatial(16, 2.0 * PI).unwrap();
        let mut f = ScalarField::zeros(grid, Representation::Fourier);
        let idx = grid.index(0, slot_of(3, 16).unwrap(), slot_of(-4, 16).unwrap());
        f.component_mut(0)[idx] = Complex64::new(2.0, -1.0);
        f.apply_real_multiplier(symbols::bracket_xi(0.7)).unwrap();
        // ξ₀ = (3, −4), |ξ₀|² = 25.
        let expected = Complex64::new(2.0, -1.0) * 26f64.powf(0.35);
        assert!((f.component(0)[idx] - expected).norm() < 1e-12);
    }

    #[test]
    fn inverse_symbols_compose_to_identity() {
        let grid = GridSpec::space_time(8, 3.0, 4, 2.0).unwrap();
        let f = random_field::<2>(grid, 3).dft_forward().unwrap();
        let mut g = f.clone();
        g.apply_real_multiplier(|_| 1.0).unwrap();
        assert_eq!(g, f);
        g.apply_real_multiplier(symbols::a_power(0.5)).unwrap();
        g.apply_real_multiplier(symbols::a_power(-0.5)).unwrap();
        assert!(g.rel_distance(&f) < 1e-12);
    }

    #[test]
    fn real_symbols_preserve_hermitian_symmetry() {
        let grid = GridSpec::spatial(16, 5.0).unwrap();
        let f = ScalarField::from_fn(grid, |_, x| {
            [Complex64::new((x[0] - 2.0).powi(2).neg_exp() * x[1].cos(), 0.0)]
        })
        .dft_forward()
        .unwrap();
        assert!(f.hermitian_defect().unwrap() < 1e-12);
        let mut g = f.clone();
        g.apply_real_multiplier(symbols::bracket_xi(-1.3)).unwrap();
        assert!(g.hermitian_defect().unwrap() < 1e-12);
    }

    trait NegExp {
        fn neg_exp(self) -> f64;
    }
    impl NegExp for f64 {
        fn neg_exp(self) -> f64 {
            (-self).exp()
        }
    }

    #[test]
    fn two_thirds_mask_keeps_the_alias_free_band() {
        let grid = GridSpec::spatial(64, 1.0).unwrap();
        let keep = two_thirds_mask(&grid);
        let kept = (0..grid.len()).filter(|&i| keep(i)).count();
        assert_eq!(kept, 43 * 43);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn parseval_and_round_trip(seed in 0u64..10_000, nt in 1usize..5) {
            let grid = if nt == 1 {
                GridSpec::spatial(8, 1.0).unwrap()
            } else {
                GridSpec::space_time(8, 1.0, 2 * nt, 1.0).unwrap()
            };
            let f: SpinorField = random_field(grid, seed);
            let hat = f.clone().dft_forward().unwrap();
            let rel = (hat.sum_sq() - f.sum_sq()).abs() / f.sum_sq();
            prop_assert!(rel < 1e-12);
            let back = hat.dft_inverse().unwrap();
            prop_assert!(back.rel_distance(&f) < 1e-12);
        }
    }
}
