use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{
    advect, fractional_semigroup, leray_project, sup_norm_refined, SpectralVectorField,
};

/// `τ ↦ e^{-τ(-Δ)^α} f`.
pub fn semigroup_orbit(
    f: &SpectralVectorField,
    alpha: f64,
) -> impl Fn(f64) -> Result<SpectralVectorField> + Sync + '_ {
    move |tau| fractional_semigroup(f, tau, alpha)
}

/// Gauss–Legendre nodes and weights mapped to `[a, b]`.
pub(crate) fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
    let n = NonZeroUsize::new(n).ok_or_else(|| Error::Domain("quadrature needs at least one node".into()))?;
    let rule = GaussLegendre::new(n);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    Ok(rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect())
}

fn check_room(u: &SpectralVectorField, v: &SpectralVectorField) -> Result<()> {
    if u.grid() != v.grid() {
        return Err(Error::Grid("bilinear operands live on different grids".into()));
    }
    let (bu, bv) = (u.active_band(0.0), v.active_band(0.0));
    let cut = u.grid().cutoffs();
    for a in 0..3 {
        if !u.is_zero() && !v.is_zero() && bu[a] + bv[a] > cut[a] {
            return Err(Error::GridTooSmall {
                what: "bilinear product".into(),
                axis: a + 1,
                required: bu[a] + bv[a],
                available: cut[a],
            });
        }
    }
    Ok(())
}

/// `∫_0^t e^{-(t-τ)(-Δ)^α} P (u(τ)·∇) v(τ) dτ` by `n_quad`-point
/// Gauss–Legendre quadrature in `τ`. The grid must hold every product mode.
pub fn bilinear_numeric<U, V>(u: U, v: V, t: f64, alpha: f64, n_quad: usize) -> Result<SpectralVectorField>
where
    U: Fn(f64) -> Result<SpectralVectorField> + Sync,
    V: Fn(f64) -> Result<SpectralVectorField> + Sync,
{
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be nonnegative, got {t}")));
    }
    let u0 = u(0.0)?;
    let grid = *u0.grid();
    if t == 0.0 {
        return Ok(SpectralVectorField::zeros(grid));
    }
    let nodes = gauss_legendre(n_quad, 0.0, t)?;
    let terms: Vec<SpectralVectorField> = nodes
        .par_iter()
        .map(|&(tau, w)| {
            let (ut, vt) = (u(tau)?, v(tau)?);
            check_room(&ut, &vt)?;
            let prod = leray_project(&advect(&ut, &vt)?);
            Ok(fractional_semigroup(&prod, t - tau, alpha)?.scaled(w))
        })
        .collect::<Result<_>>()?;
    let mut acc = SpectralVectorField::zeros(grid);
    for term in &terms {
        acc = acc.axpy(1.0, term);
    }
    Ok(acc)
}

/// Ratio of `‖B_α(u, v)(t)‖_∞` to `∫_0^t (t-τ)^{-1/(2α)} ‖u(τ)‖_∞ ‖v(τ)‖_∞ dτ`.
/// The weight is removed by `σ = (t-τ)^{1-1/(2α)}`, which leaves a smooth
/// integrand.
pub fn lemma21_ratio<U, V>(u: U, v: V, t: f64, alpha: f64, n_quad: usize) -> Result<f64>
where
    U: Fn(f64) -> Result<SpectralVectorField> + Sync,
    V: Fn(f64) -> Result<SpectralVectorField> + Sync,
{
    if !(alpha > 0.5) {
        return Err(Error::Domain(format!("estimate needs alpha > 1/2, got {alpha}")));
    }
    let num = sup_norm_refined(&bilinear_numeric(&u, &v, t, alpha, n_quad)?, 4);
    let p = 1.0 - 1.0 / (2.0 * alpha);
    let den = if t == 0.0 {
        0.0
    } else {
        let nodes = gauss_legendre(n_quad, 0.0, t.powf(p))?;
        let vals: Vec<f64> = nodes
            .par_iter()
            .map(|&(sigma, w)| {
                let tau = (t - sigma.powf(1.0 / p)).max(0.0);
                Ok(w * sup_norm_refined(&u(tau)?, 4) * sup_norm_refined(&v(tau)?, 4))
            })
            .collect::<Result<_>>()?;
        vals.iter().sum::<f64>() / p
    };
    if den == 0.0 {
        if num == 0.0 {
            return Ok(0.0);
        }
        return Err(Error::Inconsistent(format!(
            "bilinear term has sup norm {num:.3e} but the bound vanishes"
        )));
    }
    Ok(num / den)
}
