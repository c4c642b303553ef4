use dkg_core::dirac_algebra::SignPair;
use dkg_core::harness::angles::{equivalence_ratio, rhs_c, Bound16Denominator, Equivalence};
use dkg_core::harness::bilinear::{admissibility, Admissible, BilinearParams};
use dkg_core::harness::nullform::verify_nullform_13;
use dkg_core::harness::product::reduction_violations;
use dkg_core::harness::region::{admissible_region, in_r2_region, RegionQuery, RegionVariant, Q};
use dkg_core::harness::sampling::gaussian;
use dkg_core::report::RatioTracker;
use dkg_core::rng::seeded;
use dkg_core::{GridSpec, SpinorField};
use proptest::prelude::*;
use std::f64::consts::PI;

fn vec2() -> impl Strategy<Value = [f64; 2]> {
    (1e-3f64..1e3, 0.0f64..2.0 * PI).prop_map(|(r, t)| [r * t.cos(), r * t.sin()])
}

proptest! {
    #[test]
    fn equivalence_ratios_stay_in_the_proved_band(eta in vec2(), xi in vec2()) {
        for which in [Equivalence::A, Equivalence::B] {
            if let Some(q) = equivalence_ratio(which, eta, xi) {
                prop_assert!(q >= 1.0 - 1e-9 && q <= PI / 2f64.sqrt() + 1e-9, "{which:?} {q}");
            }
        }
    }

    #[test]
    fn modulation_bound_variant_is_uniform(eta in vec2(), xi in vec2(), tau in -1e3f64..1e3, lambda in -1e3f64..1e3) {
        let w = [eta[0] - xi[0], eta[1] - xi[1]];
        prop_assume!(w[0].hypot(w[1]) > 0.0);
        for signs in SignPair::ALL {
            let (a, b) = (signs.s1.value(), signs.s2.value());
            let u = [a * eta[0], a * eta[1]];
            let v = [b * w[0], b * w[1]];
            let theta = (u[0] * v[1] - u[1] * v[0]).abs().atan2(u[0] * v[0] + u[1] * v[1]);
            let rhs = rhs_c(eta, xi, tau, lambda, signs, Bound16Denominator::EtaVariant);
            prop_assert!(theta / rhs <= PI / 2f64.sqrt() + 1e-9);
        }
    }

    #[test]
    fn running_max_never_decreases(values in prop::collection::vec(0.0f64..10.0, 1..200)) {
        let mut t = RatioTracker::default();
        let mut last = 0.0;
        for v in values {
            t.push(v);
            prop_assert!(t.max >= last);
            last = t.max;
        }
        for w in t.checkpoints.windows(2) {
            prop_assert!(w[1].1 >= w[0].1);
        }
    }

    #[test]
    fn r2_thresholds_plus_delta_are_admissible(num in 1i64..=50) {
        let delta = Q::new(num, 1000);
        for variant in RegionVariant::BOTH {
            let (s, l) = admissible_region(&RegionQuery { r: Q::from_integer(2), delta, variant }).unwrap();
            prop_assert!(in_r2_region(s, l));
        }
    }
}

#[test]
fn nullform_constant_is_stable_across_seeds() {
    let grid = GridSpec::space_time(16, 2.0 * PI, 16, 2.0 * PI).unwrap();
    let mut constants = Vec::new();
    for seed in 0..3 {
        let mut rng = seeded(seed);
        let psi: SpinorField = gaussian(grid, &mut rng);
        let psi2: SpinorField = gaussian(grid, &mut rng);
        for signs in [SignPair::ALL[0], SignPair::ALL[1]] {
            let rep = verify_nullform_13(&psi, &psi2, signs, seed).unwrap();
            assert_eq!(rep.passed, Some(true), "{}", rep.to_json());
            constants.push(rep.constants.max_ratio);
        }
    }
    let (lo, hi) = constants.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &c| (a.min(c), b.max(c)));
    assert!(hi <= 0.5 && lo > 0.0 && hi / lo < 3.0, "{constants:?}");
}

#[test]
fn acceptance_parameters_are_admissible_and_reducible() {
    let p = BilinearParams { r: 2.0, s: 0.0, l: 0.26, b: 0.51, epsilon: 0.01 };
    assert_eq!(admissibility(&p).unwrap(), Admissible::R2Region);
    let p = BilinearParams { r: 1.01, s: 0.635, l: 1.26, b: 1.0, epsilon: 0.01 };
    assert!(matches!(admissibility(&p).unwrap(), Admissible::Shifted { .. }));
    // The duality reduction is stated for the base hypotheses themselves.
    let (r, e) = (1.01, 0.01);
    let (s, l, b) = (5.0 / (8.0 * r) + e, 0.5 + 0.75 / r + e, 1.0 / r + e);
    assert!(reduction_violations(r, s, l, b, e).is_empty());
}
