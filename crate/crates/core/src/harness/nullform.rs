//! Pointwise null-form bound
//!
//! ```text
//! |F⟨βΠ_{±₁}ψ, Π_{±₂}ψ′⟩(τ, ξ)| ≤ C ∫ ∠(±₁η, ±₂(η−ξ)) |ψ̃(λ, η)| |ψ̃′(λ−τ, η−ξ)| dλ dη
//! ```
//!
//! checked by direct (non-periodic) lattice convolution. The symbol norm is
//! `|Π_{±₂}(η−ξ) β Π_{±₁}(η)| = sin(θ/2) ≤ θ/2`, so `C = 1/2` always suffices.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::angles::angle_accurate;
use crate::dirac_algebra::{beta, projection, SignPair};
use crate::error::{Error, Result};
use crate::report::{EstimateReport, RatioTracker};
use crate::spectral_grid::{GridSpec, Representation, SpinorField};

/// Largest lattice the direct convolution accepts.
pub const MAX_POINTS: usize = 8192;

/// Relative size below which a right-hand side counts as zero.
const ZERO_RHS: f64 = 1e-14;

/// Both sides at one output frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointValue {
    pub k: [i64; 3],
    pub lhs: f64,
    pub rhs: f64,
}

/// Both sides of the bound at every output frequency `k = j − m`. The zero
/// spatial mode of either input is dropped (the angle is undefined there).
pub fn nullform_sides(psi: &SpinorField, psi2: &SpinorField, signs: SignPair) -> Result<Vec<PointValue>> {
    psi.expect_rep(Representation::Fourier)?;
    psi2.expect_rep(Representation::Fourier)?;
    psi.check_same_grid(psi2)?;
    let grid = *psi.grid();
    if grid.len() > MAX_POINTS {
        return Err(Error::ResolutionCap(format!(
            "null-form convolution is O(N²); {} lattice points exceed the cap of {MAX_POINTS}",
            grid.len()
        )));
    }
    let b = beta();
    let (s1, s2) = (signs.s1.value(), signs.s2.value());
    // a_j = βΠ₁(η_j)ψ̃_j, c_m = Π₂(η_m)ψ̃′_m with η_m = η_j − ξ.
    let mut a = Vec::new();
    let mut c = Vec::new();
    for idx in 0..grid.len() {
        let f = grid.frequency(idx);
        if f.abs_xi() == 0.0 {
            continue;
        }
        let wn = grid.wave_numbers(idx);
        let v = psi.value(idx);
        if v[0] != Complex64::default() || v[1] != Complex64::default() {
            a.push((wn, f.xi, (b * projection(f.xi, signs.s1)).apply(v), v[0].norm().hypot(v[1].norm())));
        }
        let w = psi2.value(idx);
        if w[0] != Complex64::default() || w[1] != Complex64::default() {
            c.push((wn, f.xi, projection(f.xi, signs.s2).apply(w), w[0].norm().hypot(w[1].norm())));
        }
    }
    let mut acc: HashMap<[i64; 3], (Complex64, f64)> = HashMap::new();
    for &(kj, eta, av, na) in &a {
        let u = [s1 * eta[0], s1 * eta[1]];
        for &(km, etam, cv, nc) in &c {
            let k = [kj.0 - km.0, kj.1 - km.1, kj.2 - km.2];
            let theta = angle_accurate(u, [s2 * etam[0], s2 * etam[1]]);
            let e = acc.entry(k).or_default();
            e.0 += av[0] * cv[0].conj() + av[1] * cv[1].conj();
            e.1 += theta * na * nc;
        }
    }
    let mut out: Vec<PointValue> = acc
        .into_iter()
        .map(|(k, (l, r))| PointValue { k, lhs: l.norm(), rhs: r })
        .collect();
    out.sort_by_key(|p| p.k);
    Ok(out)
}

/// Empirical constant `C = max LHS/RHS` over all lattice points and the
/// count of points where the right side vanishes but the left does not.
pub fn verify_nullform_13(psi: &SpinorField, psi2: &SpinorField, signs: SignPair, seed: u64) -> Result<EstimateReport> {
    let points = nullform_sides(psi, psi2, signs)?;
    let scale = points.iter().map(|p| p.rhs).fold(0.0, f64::max);
    let mut tracker = RatioTracker::default();
    let mut violations = 0usize;
    for p in &points {
        if p.rhs <= ZERO_RHS * scale {
            tracker.skip();
            if p.lhs > ZERO_RHS * scale.max(1.0) {
                violations += 1;
            }
        } else {
            tracker.push(p.lhs / p.rhs);
        }
    }
    let grid: GridSpec = *psi.grid();
    let mut report = EstimateReport::new("nullform13", seed)
        .param("signs", signs.label())
        .param("points", points.len())
        .param("zero_rhs_violations", violations);
    report.grid = Some(grid);
    report.absorb(&tracker);
    report.passed = Some(violations == 0 && tracker.max <= 0.5 * (1.0 + 1e-12));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac_algebra::{nullform_symbol, Sign};
    use crate::harness::sampling::gaussian;
    use crate::rng::seeded;
    use crate::spectral_grid::slot_of;
    use std::f64::consts::PI;

    fn grid() -> GridSpec {
        GridSpec::space_time(8, 2.0 * PI, 8, 2.0 * PI).unwrap()
    }

    fn single(grid: GridSpec, k: (i64, i64, i64), v: [Complex64; 2]) -> SpinorField {
        let mut f = SpinorField::zeros(grid, Representation::Fourier);
        let idx = grid.index(
            slot_of(k.0, grid.n_t).unwrap(),
            slot_of(k.1, grid.n_x).unwrap(),
            slot_of(k.2, grid.n_x).unwrap(),
        );
        f.set_value(idx, v);
        f
    }

    #[test]
    fn single_modes_give_one_point_with_closed_form() {
        let g = grid();
        let v = [Complex64::new(0.3, -0.2), Complex64::new(0.7, 0.1)];
        let w = [Complex64::new(-0.4, 0.5), Complex64::new(0.2, 0.9)];
        let psi = single(g, (1, 2, 1), v);
        let psi2 = single(g, (-1, -1, 2), w);
        let signs = SignPair::new(Sign::Plus, Sign::Minus);
        let pts = nullform_sides(&psi, &psi2, signs).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].k, [2, 3, -1]);
        let eta = [2.0, 1.0];
        let xi = [3.0, -1.0];
        let m = nullform_symbol(eta, xi, signs).unwrap();
        let mv = m.apply(v);
        let lhs = (mv[0] * w[0].conj() + mv[1] * w[1].conj()).norm();
        assert!((pts[0].lhs - lhs).abs() < 1e-14);
        let theta = angle_accurate(eta, [-(eta[0] - xi[0]), -(eta[1] - xi[1])]);
        let nv = v[0].norm().hypot(v[1].norm());
        let nw = w[0].norm().hypot(w[1].norm());
        assert!((pts[0].rhs - theta * nv * nw).abs() < 1e-14);
    }

    #[test]
    fn random_fields_satisfy_the_bound_with_half() {
        let g = grid();
        let mut rng = seeded(21);
        let psi: SpinorField = gaussian(g, &mut rng);
        let psi2: SpinorField = gaussian(g, &mut rng);
        for signs in SignPair::ALL {
            let r = verify_nullform_13(&psi, &psi2, signs, 21).unwrap();
            assert_eq!(r.passed, Some(true), "{}", r.to_json());
        }
    }

    #[test]
    fn parallel_modes_produce_no_violation() {
        // η and η−ξ parallel with (+,+): angle 0 and the symbol vanishes.
        let g = grid();
        let psi = single(g, (0, 2, 0), [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.5)]);
        let psi2 = single(g, (0, 1, 0), [Complex64::new(0.2, 0.0), Complex64::new(-1.0, 0.3)]);
        let r = verify_nullform_13(&psi, &psi2, SignPair::new(Sign::Plus, Sign::Plus), 0).unwrap();
        assert_eq!(r.passed, Some(true));
        assert_eq!(r.skipped, 1);
    }

    #[test]
    fn large_lattice_hits_the_cap() {
        let g = GridSpec::space_time(32, 2.0 * PI, 16, 2.0 * PI).unwrap();
        let f = SpinorField::zeros(g, Representation::Fourier);
        assert!(matches!(
            nullform_sides(&f, &f, SignPair::ALL[0]),
            Err(Error::ResolutionCap(_))
        ));
    }
}
