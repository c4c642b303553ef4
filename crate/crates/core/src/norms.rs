//! Fourier–Lebesgue norms `Ĥ^{s,r}` and Bourgain-type norms `X^r_{s,b,±}`,
//! `X^r_{s,b}` on lattices.
//!
//! Norms are computed from continuum-scaled coefficients
//! `û = grid.continuum_scale() · c` with the Fourier cell measure included, so
//! `‖f‖ = (Σ (w(τ,ξ)|û|)^p Δ)^{1/p}` approximates the continuum norm. The sum
//! exponent is `p = r′ = r/(r−1)`, or `p = r` for the dual-index spaces
//! `X^{r′}_{s,b}` (flag `dual`).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::EstimateReport;
use crate::spectral_grid::{japanese, Field, Frequency, GridSpec, Representation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
    Wave,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub s: f64,
    pub r: f64,
    #[serde(default)]
    pub b: f64,
    pub branch: Branch,
    #[serde(default)]
    pub homogeneous: bool,
    #[serde(default)]
    pub dual: bool,
}

impl NormSpec {
    /// `Ĥ^{s,r}`.
    pub fn sobolev(s: f64, r: f64) -> Self {
        Self {
            s,
            r,
            b: 0.0,
            branch: Branch::None,
            homogeneous: false,
            dual: false,
        }
    }

    /// `X^r_{s,b,±}` or, with `Branch::Wave`, `X^r_{s,b}`.
    pub fn xsb(s: f64, b: f64, r: f64, branch: Branch) -> Self {
        Self {
            s,
            r,
            b,
            branch,
            homogeneous: false,
            dual: false,
        }
    }

    pub fn homogeneous(mut self) -> Self {
        self.homogeneous = true;
        self
    }

    pub fn dual(mut self) -> Self {
        self.dual = true;
        self
    }

    /// `r′ = r/(r−1)`.
    pub fn r_prime(&self) -> f64 {
        self.r / (self.r - 1.0)
    }

    /// Exponent of the lattice sum.
    pub fn exponent(&self) -> f64 {
        if self.dual {
            self.r
        } else {
            self.r_prime()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 1.0 && self.r <= 2.0) {
            return Err(Error::Parameter(format!("r must lie in (1, 2], got {}", self.r)));
        }
        if !(self.s.is_finite() && self.b.is_finite()) {
            return Err(Error::Parameter("s and b must be finite".into()));
        }
        Ok(())
    }

    /// Frequency weight, `None` where it is undefined (homogeneous `ξ = 0`).
    pub fn weight(&self, f: Frequency) -> Option<f64> {
        let a = f.abs_xi();
        let space = if self.homogeneous {
            if a == 0.0 {
                return None;
            }
            a.powf(self.s)
        } else {
            japanese(a).powf(self.s)
        };
        let modulation = match self.branch {
            Branch::None => return Some(space),
            Branch::Plus => japanese(f.tau + a),
            Branch::Minus => japanese(f.tau - a),
            Branch::Wave => japanese(f.tau.abs() - a),
        };
        Some(space * modulation.powf(self.b))
    }
}

/// Weighted lattice norm without representation or branch checks.
fn weighted_norm<const C: usize>(f: &Field<C>, spec: &NormSpec) -> f64 {
    let grid = f.grid();
    let scale = grid.continuum_scale();
    let measure = grid.fourier_measure();
    let p = spec.exponent();
    let mut acc = 0.0;
    for idx in 0..grid.len() {
        let m = f.modulus(idx);
        if m == 0.0 {
            continue;
        }
        if let Some(w) = spec.weight(grid.frequency(idx)) {
            acc += (w * m * scale).powf(p);
        }
    }
    (acc * measure).powf(1.0 / p)
}

/// `‖⟨ξ⟩^s f̂‖_{ℓ^{r′}}` with lattice measure; `|ξ|^s` and `ξ ≠ 0` when
/// homogeneous.
pub fn fourier_lebesgue_norm<const C: usize>(f: &Field<C>, spec: &NormSpec) -> Result<f64> {
    spec.validate()?;
    f.expect_rep(Representation::Fourier)?;
    if spec.branch != Branch::None {
        return Err(Error::Parameter("Ĥ^{s,r} norm needs branch = none".into()));
    }
    if f.grid().is_space_time() {
        return Err(Error::Parameter("Ĥ^{s,r} norm needs a spatial field".into()));
    }
    Ok(weighted_norm(f, spec))
}

/// Fraction of `ℓ²` mass carried by the `ξ = 0` modes.
pub fn zero_mode_fraction<const C: usize>(f: &Field<C>) -> Result<f64> {
    f.expect_rep(Representation::Fourier)?;
    let g = f.grid();
    let total = f.sum_sq();
    if total == 0.0 {
        return Ok(0.0);
    }
    let slice = g.nodes_per_slice();
    let zero: f64 = (0..g.n_t).map(|it| f.modulus(it * slice).powi(2)).sum();
    Ok(zero / total)
}

/// Threshold above which an excluded zero mode is flagged.
pub const ZERO_MODE_THRESHOLD: f64 = 1e-12;

/// `‖⟨ξ⟩^s⟨τ ± |ξ|⟩^b ũ‖_{ℓ^{r′}}` (or `⟨|τ|−|ξ|⟩^b` on the wave branch).
pub fn xsb_norm<const C: usize>(u: &Field<C>, spec: &NormSpec) -> Result<f64> {
    spec.validate()?;
    u.expect_rep(Representation::Fourier)?;
    if !u.grid().is_space_time() {
        return Err(Error::Parameter("X^{s,b} norm needs a space-time field (n_t > 1)".into()));
    }
    if spec.branch == Branch::None {
        return Err(Error::Parameter("X^{s,b} norm needs branch plus, minus or wave".into()));
    }
    Ok(weighted_norm(u, spec))
}

/// Smooth cutoff equal to 1 on `[0, t_sub]` with raised-cosine flanks of width
/// `t_sub/4`, wrapped periodically onto `[0, window)`.
pub fn temporal_cutoff(t: f64, t_sub: f64, window: f64) -> f64 {
    if t_sub >= window {
        return 1.0;
    }
    let flank = t_sub / 4.0;
    let bump = |t: f64| {
        if (0.0..=t_sub).contains(&t) {
            1.0
        } else if t < 0.0 && t > -flank {
            0.5 * (1.0 + (PI * t / flank).cos())
        } else if t > t_sub && t < t_sub + flank {
            0.5 * (1.0 + (PI * (t - t_sub) / flank).cos())
        } else {
            0.0
        }
    };
    [-1.0, 0.0, 1.0]
        .iter()
        .map(|k| bump(t + k * window))
        .fold(0.0, f64::max)
}

/// Upper bound for the restriction norm `X^r_{s,b,±}[0, t_sub]`: the norm of the
/// given extension after multiplying by [`temporal_cutoff`].
pub fn restriction_norm<const C: usize>(u: &Field<C>, t_sub: f64, spec: &NormSpec) -> Result<f64> {
    let grid = *u.grid();
    if !grid.is_space_time() {
        return Err(Error::Parameter("restriction norm needs a space-time field".into()));
    }
    if !(t_sub > 0.0 && t_sub <= grid.window * (1.0 + 1e-12)) {
        return Err(Error::Parameter(format!(
            "T_sub must lie in (0, {}], got {t_sub}",
            grid.window
        )));
    }
    let mut phys = match u.rep() {
        Representation::Physical => u.clone(),
        Representation::Fourier => u.clone().dft_inverse()?,
    };
    let slice = grid.nodes_per_slice();
    for it in 0..grid.n_t {
        let chi = temporal_cutoff(grid.time(it), t_sub, grid.window);
        if chi == 1.0 {
            continue;
        }
        for c in 0..C {
            for v in &mut phys.component_mut(c)[it * slice..(it + 1) * slice] {
                *v *= chi;
            }
        }
    }
    xsb_norm(&phys.dft_forward()?, spec)
}

/// Modulus of continuity of `t ↦ u₊(t) + u₋(t)` in `Ĥ^{s,r}` over adjacent
/// time samples. `lhs` holds the largest modulus; `parameters.table` lists
/// `[t, modulus]` rows.
pub fn continuity_check<const C: usize>(
    u_plus: &Field<C>,
    u_minus: &Field<C>,
    spec: &NormSpec,
) -> Result<EstimateReport> {
    spec.validate()?;
    if spec.b <= 1.0 / spec.r {
        return Err(Error::Parameter(format!(
            "continuity needs b > 1/r, got b = {} with 1/r = {}",
            spec.b,
            1.0 / spec.r
        )));
    }
    u_plus.check_same_grid(u_minus)?;
    let grid = *u_plus.grid();
    if !grid.is_space_time() {
        return Err(Error::Parameter("continuity check needs a space-time field".into()));
    }
    let to_phys = |f: &Field<C>| match f.rep() {
        Representation::Physical => Ok(f.clone()),
        Representation::Fourier => f.clone().dft_inverse(),
    };
    let u = to_phys(u_plus)?.add(&to_phys(u_minus)?);
    let spatial_spec = NormSpec {
        branch: Branch::None,
        b: 0.0,
        ..*spec
    };
    let slices: Vec<Field<C>> = (0..grid.n_t)
        .map(|it| u.time_slice(it))
        .collect::<Result<_>>()?;
    let mut table = Vec::new();
    let mut worst: f64 = 0.0;
    let mut sup_norm: f64 = 0.0;
    for it in 0..grid.n_t {
        let hat = slices[it].clone().dft_forward()?;
        sup_norm = sup_norm.max(fourier_lebesgue_norm(&hat, &spatial_spec)?);
        if it + 1 < grid.n_t {
            let d = slices[it + 1].sub(&slices[it]).dft_forward()?;
            let m = fourier_lebesgue_norm(&d, &spatial_spec)?;
            worst = worst.max(m);
            table.push(serde_json::json!([grid.time(it), m]));
        }
    }
    let mut report = EstimateReport::new("continuity_check", 0)
        .param("s", spec.s)
        .param("r", spec.r)
        .param("b", spec.b)
        .param("dt", grid.dt())
        .param("table", table)
        .param("sup_norm", sup_norm);
    report.grid = Some(grid);
    report.count = grid.n_t.saturating_sub(1);
    report.set_single(worst, sup_norm);
    Ok(report)
}

/// JSON export record `{spec, grid, value}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRecord {
    pub spec: NormSpec,
    pub grid: GridSpec,
    pub value: f64,
}

/// Evaluates `spec` on `f` (spatial or space-time by branch) as a record.
pub fn norm_record<const C: usize>(f: &Field<C>, spec: &NormSpec) -> Result<NormRecord> {
    let value = if spec.branch == Branch::None {
        fourier_lebesgue_norm(f, spec)?
    } else {
        xsb_norm(f, spec)?
    };
    Ok(NormRecord {
        spec: *spec,
        grid: *f.grid(),
        value,
    })
}
