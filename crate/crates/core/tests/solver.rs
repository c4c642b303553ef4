use dkg_core::dirac_algebra::{projection, Sign};
use dkg_core::rng::{complex_gaussian, seeded};
use dkg_core::solver::*;
use dkg_core::spectral_grid::{japanese, slot_of, symbols, two_thirds_mask};
use dkg_core::{GridSpec, Representation, ScalarField, SpinorField};
use num_complex::Complex64;

fn gaussian_data(grid: GridSpec, amp: f64) -> DKGState {
    let (psi, phi, dphi) = InitialData::Gaussian {
        psi: [amp, 0.6 * amp],
        phi: amp,
        dt_phi: 0.5 * amp,
        width: 1.5,
    }
    .build(grid, 0)
    .unwrap();
    split_data(&psi, &phi, &dphi).unwrap()
}

fn random_low_modes<const C: usize>(grid: GridSpec, seed: u64) -> dkg_core::Field<C> {
    let mut rng = seeded(seed);
    let keep = two_thirds_mask(&grid);
    let comps = std::array::from_fn(|_| {
        (0..grid.len())
            .map(|i| if keep(i) { complex_gaussian(&mut rng) } else { Complex64::default() })
            .collect()
    });
    dkg_core::Field::from_components(grid, Representation::Fourier, comps).unwrap()
}

/// Dealiased product of Fourier coefficient arrays by direct O(N²) convolution.
fn convolve(grid: &GridSpec, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = grid.n_x;
    let keep = two_thirds_mask(grid);
    let mut out = vec![Complex64::default(); grid.len()];
    for i in (0..grid.len()).filter(|&i| keep(i)) {
        for j in (0..grid.len()).filter(|&j| keep(j)) {
            let (_, a1, a2) = grid.wave_numbers(i);
            let (_, b1, b2) = grid.wave_numbers(j);
            let k1 = (a1 + b1).rem_euclid(n as i64) as usize;
            let k2 = (a2 + b2).rem_euclid(n as i64) as usize;
            let idx = grid.index(0, k1, k2);
            if keep(idx) {
                out[idx] += a[i] * b[j] / n as f64;
            }
        }
    }
    out
}

#[test]
fn split_examples_and_round_trip() {
    let g = GridSpec::spatial(16, 10.0).unwrap();
    let (psi, phi, _) = InitialData::RandomSpectrum { decay: 1.0, amplitude: 1.0 }.build(g, 3).unwrap();
    let zero = ScalarField::zeros(g, Representation::Physical);
    let st = split_data(&psi, &phi, &zero).unwrap();
    assert_eq!(st.phi_plus, st.phi_minus);
    let back = reassemble(&st).unwrap();
    assert!(back.dt_phi.max_abs() < 1e-14);

    // Data already in the range of Π₊.
    let plus = project(&psi.clone().dft_forward().unwrap(), Sign::Plus).unwrap();
    let st = split_data(&plus.dft_inverse().unwrap(), &phi, &zero).unwrap();
    let mut leftover = st.psi_minus.clone();
    leftover.mask(|i| i != 0);
    assert!(leftover.max_abs() < 1e-13);

    let dphi = ScalarField::from_fn(g, |_, x| [Complex64::new((x[0] * 0.3).sin() + x[1].cos() * 0.1, 0.0)]);
    let st = split_data(&psi, &phi, &dphi).unwrap();
    let back = reassemble(&st).unwrap();
    assert!(back.psi.rel_distance(&psi) < 1e-12);
    assert!(back.phi.rel_distance(&phi) < 1e-12);
    assert!(back.dt_phi.rel_distance(&dphi) < 1e-12);

    let other = GridSpec::spatial(8, 10.0).unwrap();
    assert!(split_data(&psi, &ScalarField::zeros(other, Representation::Physical), &zero).is_err());
}

#[test]
fn rhs_vanishes_in_trivial_cases() {
    let g = GridSpec::spatial(16, 8.0).unwrap();
    let mut st = DKGState::zeros(g);
    st.phi_plus = random_low_modes(g, 1);
    st.phi_minus = st.phi_plus.clone();
    let params = PhysicsParams::new(0.0, -1.0);
    for sign in Sign::BOTH {
        assert_eq!(rhs_dirac(&st, &params, sign).unwrap().max_abs(), 0.0);
        assert_eq!(rhs_kg(&st, &params, sign).unwrap().max_abs(), 0.0);
    }
    // ψ₊ + ψ₋ = 0 with M = 0.
    let psi: SpinorField = random_low_modes(g, 2);
    st.psi_plus = psi.clone();
    st.psi_minus = psi.scaled(-1.0);
    assert!(rhs_dirac(&st, &params, Sign::Plus).unwrap().max_abs() < 1e-14);
    // ψ ≡ 0: the KG source is ∓A^{−1/2}(m+1)φ.
    let st0 = DKGState { psi_plus: SpinorField::zeros(g, Representation::Fourier), psi_minus: SpinorField::zeros(g, Representation::Fourier), ..st.clone() };
    let p = PhysicsParams::new(0.3, 1.5);
    let got = rhs_kg(&st0, &p, Sign::Minus).unwrap();
    let mut expected = st0.phi_plus.clone().scaled(2.5);
    expected.apply_real_multiplier(symbols::a_power(-0.5)).unwrap();
    assert!(got.rel_distance(&expected) < 1e-14);
}

#[test]
fn rhs_matches_direct_convolution() {
    let g = GridSpec::spatial(8, 6.0).unwrap();
    let psi: SpinorField = random_low_modes(g, 11);
    let phi: ScalarField = random_low_modes(g, 12);
    let st = DKGState {
        psi_plus: project(&psi, Sign::Plus).unwrap(),
        psi_minus: project(&psi, Sign::Minus).unwrap(),
        phi_plus: phi.clone(),
        phi_minus: phi.clone(),
        time: 0.0,
    };
    let params = PhysicsParams::new(0.7, 0.4);
    // β(M + φ)ψ and ⟨βψ,ψ⟩ by convolution.
    let y0 = convolve(&g, phi.component(0), psi.component(0));
    let y1 = convolve(&g, phi.component(0), psi.component(1));
    let conj = |c: usize| -> Vec<Complex64> {
        (0..g.len())
            .map(|i| {
                let (_, k1, k2) = g.wave_numbers(i);
                let j = g.index(0, slot_of(-k1, 8).unwrap_or(0), slot_of(-k2, 8).unwrap_or(0));
                psi.component(c)[j].conj()
            })
            .collect()
    };
    let r0 = convolve(&g, psi.component(0), &conj(0));
    let r1 = convolve(&g, psi.component(1), &conj(1));
    for sign in Sign::BOTH {
        let got = rhs_dirac(&st, &params, sign).unwrap();
        let kg = rhs_kg(&st, &params, sign).unwrap();
        for i in 0..g.len() {
            let f = g.frequency(i);
            let gvec = [
                params.dirac_mass * psi.component(0)[i] + y0[i],
                -params.dirac_mass * psi.component(1)[i] - y1[i],
            ];
            let want = projection(f.xi, sign).apply(gvec);
            for c in 0..2 {
                assert!((got.component(c)[i] - want[c]).norm() < 1e-10);
            }
            let q = (r0[i] - r1[i]) + (params.kg_mass + 1.0) * phi.component(0)[i];
            let want = -sign.value() * q / japanese(f.abs_xi());
            assert!((kg.component(0)[i] - want).norm() < 1e-10);
        }
    }
}

#[test]
fn free_flow_phase_is_exact() {
    let g = GridSpec::spatial(16, 2.0 * std::f64::consts::PI).unwrap();
    let mut st = DKGState::zeros(g);
    let idx = g.index(0, slot_of(3, 16).unwrap(), slot_of(-2, 16).unwrap());
    st.psi_plus.set_value(idx, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5)]);
    st.phi_minus.component_mut(0)[idx] = Complex64::new(0.3, 0.0);
    let cfg = SolverConfig::stepping(0.01, 100);
    let traj = evolve(&st, &PhysicsParams::free(), &cfg, 100).unwrap();
    let end = traj.last().unwrap();
    let t = end.time;
    let w = 13f64.sqrt();
    let phase = Complex64::from_polar(1.0, -t * w);
    assert!((end.psi_plus.component(0)[idx] - phase).norm() < 1e-12);
    assert!((end.psi_plus.component(1)[idx] - Complex64::new(0.0, 0.5) * phase).norm() < 1e-12);
    let kg = Complex64::from_polar(0.3, t * japanese(w));
    assert!((end.phi_minus.component(0)[idx] - kg).norm() < 1e-12);
    let n0 = st.phi_minus.sum_sq();
    assert!((end.phi_minus.sum_sq() - n0).abs() < 1e-10 * n0);
}

#[test]
fn stepping_is_second_order() {
    let g = GridSpec::spatial(32, 16.0).unwrap();
    let st = gaussian_data(g, 0.8);
    let params = PhysicsParams::new(1.0, 1.0);
    let run = |dt: f64| {
        let steps = (0.5 / dt).round() as usize;
        evolve(&st, &params, &SolverConfig::stepping(dt, steps), steps).unwrap().last().unwrap().clone()
    };
    let (a, b, c) = (run(0.02), run(0.01), run(0.005));
    let e1 = a.sub(&b).coefficient_norm();
    let e2 = b.sub(&c).coefficient_norm();
    let order = (e1 / e2).log2();
    assert!((order - 2.0).abs() < 0.2, "order {order}");
}

#[test]
fn charge_leakage_and_reality_along_a_run() {
    let g = GridSpec::spatial(32, 16.0).unwrap();
    let st = gaussian_data(g, 0.5);
    assert_eq!(charge(&DKGState::zeros(g).psi_plus, &DKGState::zeros(g).psi_minus).unwrap(), 0.0);
    let params = PhysicsParams::new(1.0, 1.0);
    let traj = evolve(&st, &params, &SolverConfig::stepping(0.005, 200), 50).unwrap();
    let q0 = charge(&st.psi_plus, &st.psi_minus).unwrap();
    for s in &traj.states {
        let q = charge(&s.psi_plus, &s.psi_minus).unwrap();
        assert!((q - q0).abs() / q0 < 1e-6);
        assert!(projection_leakage(s).unwrap() < 1e-8);
        let r = reassemble(s).unwrap();
        assert!(r.phi.imaginary_residue().unwrap() < 1e-8);
        assert!(r.dt_phi.imaginary_residue().unwrap() < 1e-8);
    }
}

#[test]
fn single_mode_charge_matches_parseval() {
    let g = GridSpec::spatial(8, 3.0).unwrap();
    let mut p = SpinorField::zeros(g, Representation::Fourier);
    p.set_value(5, [Complex64::new(1.0, 0.0), Complex64::default()]);
    let z = SpinorField::zeros(g, Representation::Fourier);
    let q = charge(&p, &z).unwrap();
    let phys = p.dft_inverse().unwrap();
    let direct = (phys.sum_sq() * g.dx() * g.dx()).sqrt();
    assert!((q - direct).abs() < 1e-14);
    assert!((q - g.dx()).abs() < 1e-14);
}

#[test]
fn residual_of_zero_fields_and_sample_count() {
    let g = GridSpec::space_time(8, 4.0, 6, 0.6).unwrap();
    let psi = SpinorField::zeros(g, Representation::Physical);
    let phi = ScalarField::zeros(g, Representation::Physical);
    let r = residual_original(&psi, &phi, &PhysicsParams::new(0.5, 3.0)).unwrap();
    assert_eq!((r.dirac, r.kg), (0.0, 0.0));
    let g4 = GridSpec::space_time(8, 4.0, 4, 0.4).unwrap();
    assert!(residual_original(
        &SpinorField::zeros(g4, Representation::Physical),
        &ScalarField::zeros(g4, Representation::Physical),
        &PhysicsParams::new(0.0, 0.0)
    )
    .is_err());
}

#[test]
fn residual_shrinks_under_refinement() {
    let params = PhysicsParams::new(1.0, 1.0);
    let mut last = f64::INFINITY;
    for (n, dt) in [(16usize, 0.02f64), (32, 0.01), (64, 0.005)] {
        let g = GridSpec::spatial(n, 16.0).unwrap();
        let st = gaussian_data(g, 0.5);
        let steps = (0.2 / dt).round() as usize;
        let traj = evolve(&st, &params, &SolverConfig::stepping(dt, steps), 1).unwrap();
        let (psi, phi) = traj.to_space_time().unwrap();
        let r = residual_original(&psi, &phi, &params).unwrap();
        let total = r.dirac + r.kg;
        assert!(total < last, "{total} !< {last}");
        last = total;
    }
}

#[test]
fn picard_free_case_converges_immediately() {
    let g = GridSpec::spatial(16, 8.0).unwrap();
    let st = gaussian_data(g, 1.0);
    let out = picard_iterate(&st, &PhysicsParams::free(), 0.1, 8, 10, 1e-12, &PicardNorms::default()).unwrap();
    assert!(out.converged);
    assert_eq!(out.differences.len(), 1);
    assert_eq!(out.differences[0], 0.0);
}

#[test]
fn picard_contracts_and_matches_stepping() {
    let g = GridSpec::spatial(16, 12.0).unwrap();
    let st = gaussian_data(g, 0.3);
    let params = PhysicsParams::new(1.0, 1.0);
    let out = picard_iterate(&st, &params, 0.1, 20, 30, 1e-11, &PicardNorms::default()).unwrap();
    assert!(out.converged, "{:?}", out.differences);
    for q in out.ratios() {
        assert!(q < 0.9, "{q}");
    }
    let limit = out.limit().last().unwrap();
    let stepped = evolve(&st, &params, &SolverConfig::stepping(0.005, 20), 20).unwrap();
    let s = stepped.last().unwrap();
    assert!(limit.sub(s).coefficient_norm() / s.coefficient_norm() < 1e-4);
}

#[test]
fn blow_up_is_reported() {
    let g = GridSpec::spatial(8, 4.0).unwrap();
    let mut st = gaussian_data(g, 1.0);
    st.phi_plus.component_mut(0)[0] = Complex64::new(f64::NAN, 0.0);
    let err = evolve(&st, &PhysicsParams::new(1.0, 1.0), &SolverConfig::stepping(0.01, 3), 1).unwrap_err();
    assert!(matches!(err, dkg_core::Error::BlowUp { .. }));
}
