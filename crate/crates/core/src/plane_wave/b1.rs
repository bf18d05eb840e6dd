use serde::{Deserialize, Serialize};

use super::bilinear::{bilinear_numeric, semigroup_orbit};
use super::wave::{duhamel_weight, PlaneWave, WaveSum, Wavevector};
use crate::construction::{initial_waves, InflationParams, ETA, V_PRIME};
use crate::spectral::{grid_for_band, Grid, SpectralVectorField};
use crate::error::{Error, Result};

/// The three pieces of the first magnetic correction: the low mode `η`
/// (`b10`), differences `k'_j - k_i` with `i ≠ j` (`b11`) and sums
/// `k'_j + k_i` (`b12`).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct B1Parts {
    pub b10: WaveSum,
    pub b11: WaveSum,
    pub b12: WaveSum,
}

impl B1Parts {
    pub fn total(&self) -> WaveSum {
        let mut s = self.b10.clone();
        s.extend(self.b11.clone());
        s.extend(self.b12.clone());
        s
    }
}

fn require_feasible(p: &InflationParams) -> Result<()> {
    let rep = p.feasibility();
    if let Some(e) = rep.first_failure() {
        return Err(Error::Infeasible {
            constraint: e.family.clone(),
            detail: format!("{} (margin {:.3e})", e.expression, e.margin),
        });
    }
    Ok(())
}

/// Builds the three wave sums with `weight(a, b)` for input decay `a` and
/// output decay `b`.
fn assemble(p: &InflationParams, weight: impl Fn(f64, f64) -> f64) -> Result<B1Parts> {
    let r = p.r as f64;
    let pre = -0.5 * r.powf(-p.beta1 - p.beta2);
    let a2 = p.alpha2;
    let ks = p.ks();
    let kps = p.k_primes();
    let eta = Wavevector(ETA);
    let overflow = || Error::Domain("wave vector overflow".into());
    let mut out = B1Parts::default();
    let mut c10 = 0.0;
    for (i, ki) in ks.iter().enumerate() {
        for (j, kj) in kps.iter().enumerate() {
            let amp = ki.norm().powf(p.theta1) * kj.norm().powf(p.theta2);
            let a = ki.rate(a2) + kj.rate(a2);
            if i == j {
                c10 += amp * weight(a, eta.rate(a2));
            } else {
                let m = kj.checked_sub(ki).ok_or_else(overflow)?;
                out.b11.push(PlaneWave::sine(pre * amp * weight(a, m.rate(a2)), m.project(V_PRIME), m));
            }
            let m = kj.checked_add(ki).ok_or_else(overflow)?;
            out.b12.push(PlaneWave::sine(pre * amp * weight(a, m.rate(a2)), m.project(V_PRIME), m));
        }
    }
    out.b10.push(PlaneWave::sine(pre * c10, V_PRIME, eta));
    Ok(out)
}

/// Exact `b₁(t) = B_{α₂}(e^{-t(-Δ)^{α₂}}u₀, e^{-t(-Δ)^{α₂}}b₀)` split into its
/// three pieces.
pub fn b1_closed_form(p: &InflationParams, t: f64) -> Result<B1Parts> {
    require_feasible(p)?;
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be nonnegative, got {t}")));
    }
    assemble(p, |a, b| duhamel_weight(a, b, t))
}

/// The transport term `(e^{-t(-Δ)^{α₂}}u₀·∇) e^{-t(-Δ)^{α₂}}b₀` split the
/// same way (`E₀`, `E₁`, `E₂`).
pub fn e_decomposition(p: &InflationParams, t: f64) -> Result<B1Parts> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be nonnegative, got {t}")));
    }
    assemble(p, |a, _| (-a * t).exp())
}

/// Slab grid holding `u₀`, `b₀` and every quadratic product among them.
pub fn first_iterate_grid(p: &InflationParams) -> Result<Grid> {
    let k = i64::try_from(2 * p.top_wavenumber()).map_err(|_| Error::Grid("ladder too large for a grid".into()))?;
    grid_for_band([k, 0, 2], true)
}

/// `(u₁(t), b₁(t))` with both bilinear terms of each evaluated by
/// quadrature, on [`first_iterate_grid`].
pub fn first_iterates_numeric(
    p: &InflationParams,
    t: f64,
    n_quad: usize,
) -> Result<(SpectralVectorField, SpectralVectorField)> {
    let grid = first_iterate_grid(p)?;
    let (u0, b0) = initial_waves(p);
    let (u0, b0) = (u0.to_field(grid)?, b0.to_field(grid)?);
    let (a1, a2) = (p.alpha1, p.alpha2);
    let u1 = &bilinear_numeric(semigroup_orbit(&u0, a1), semigroup_orbit(&u0, a1), t, a1, n_quad)?
        - &bilinear_numeric(semigroup_orbit(&b0, a1), semigroup_orbit(&b0, a1), t, a1, n_quad)?;
    let b1 = &bilinear_numeric(semigroup_orbit(&u0, a2), semigroup_orbit(&b0, a2), t, a2, n_quad)?
        - &bilinear_numeric(semigroup_orbit(&b0, a2), semigroup_orbit(&u0, a2), t, a2, n_quad)?;
    Ok((u1, b1))
}

/// Scales of the bounds on the pieces of `b₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct B1Bounds {
    /// `r^{1-β₁-β₂}`; `None` outside `|k_1|^{-2α₂} <= t <= T`.
    pub b10_lower: Option<f64>,
    /// `r^{1-β₁-β₂}`.
    pub b10_upper: f64,
    /// `r^{-β₁-β₂} t^{1-(θ₁+θ₂)/(2α₂)}`.
    pub b11_b12_upper: f64,
}

pub fn b1_bounds(p: &InflationParams, t: f64) -> Result<B1Bounds> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    let r = p.r as f64;
    let scale = r.powf(1.0 - p.beta1 - p.beta2);
    let lo = (p.k_base as f64).powf(-2.0 * p.alpha2);
    let b10_lower = (t >= lo && t <= p.t_final).then_some(scale);
    let exp = 1.0 - (p.theta1 + p.theta2) / (2.0 * p.alpha2);
    Ok(B1Bounds {
        b10_lower,
        b10_upper: scale,
        b11_b12_upper: r.powf(-p.beta1 - p.beta2) * t.powf(exp),
    })
}
