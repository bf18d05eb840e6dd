use super::etd::DtPolicy;
use super::simulate::{evolve, Integration};
use crate::error::{Error, Result};
use crate::spectral::{sup_norm_refined, Grid, SpectralVectorField};

/// Grid with every non-degenerate axis refined by `lambda`.
pub fn dilated_grid(g: &Grid, lambda: usize) -> Result<Grid> {
    let d = g.dims();
    let s = |n: usize| if n == 1 { 1 } else { n * lambda };
    Grid::new(s(d[0]), s(d[1]), s(d[2]), g.is_slab())
}

/// `f ↦ factor · f(λx)` on `target`: mode `m` moves to `λm`.
pub fn dilate(f: &SpectralVectorField, lambda: usize, factor: f64, target: Grid) -> Result<SpectralVectorField> {
    let l = lambda as i64;
    let mut coeffs = SpectralVectorField::zeros(target).into_coeffs();
    for (idx, m) in f.grid().modes() {
        let c = [f.component(0)[idx], f.component(1)[idx], f.component(2)[idx]];
        if c.iter().all(|v| v.re == 0.0 && v.im == 0.0) {
            continue;
        }
        let lm = [l * m[0], l * m[1], l * m[2]];
        let j = target.index_of(lm).ok_or_else(|| Error::GridTooSmall {
            what: format!("dilated mode {lm:?}"),
            axis: (0..3).find(|&a| lm[a].abs() > target.cutoff(a)).map_or(0, |a| a + 1),
            required: lm.iter().map(|x| x.abs()).max().unwrap_or(0),
            available: target.cutoffs().into_iter().max().unwrap_or(0),
        })?;
        for a in 0..3 {
            coeffs[a][j] = c[a] * factor;
        }
    }
    SpectralVectorField::from_coeffs(target, coeffs)
}

/// Evolves `(u0, b0)` to `t1` and the rescaled data
/// `λ^{2α-1}(u0, b0)(λx)` to `t1/λ^{2α}`, both with `n_steps` equal steps,
/// and returns the sup-norm discrepancy between the rescaled first run and
/// the second run.
pub fn scaling_symmetry_check(
    u0: &SpectralVectorField,
    b0: &SpectralVectorField,
    alpha: f64,
    lambda: usize,
    t1: f64,
    n_steps: usize,
) -> Result<f64> {
    if lambda == 0 {
        return Err(Error::Domain("scaling factor must be a positive integer".into()));
    }
    let integ = Integration { dt: DtPolicy::FixedSteps(n_steps), ..Integration::new(alpha, alpha) };
    let (s1, _) = evolve(u0, b0, &integ, t1)?;
    if lambda == 1 {
        return Ok(0.0);
    }
    let target = dilated_grid(u0.grid(), lambda)?;
    let amp = (lambda as f64).powf(2.0 * alpha - 1.0);
    let (u0l, b0l) = (dilate(u0, lambda, amp, target)?, dilate(b0, lambda, amp, target)?);
    let (s2, _) = evolve(&u0l, &b0l, &integ, t1 / (lambda as f64).powf(2.0 * alpha))?;
    let (u1l, b1l) = (dilate(&s1.u, lambda, amp, target)?, dilate(&s1.b, lambda, amp, target)?);
    let du = sup_norm_refined(&(&s2.u - &u1l), 2);
    let db = sup_norm_refined(&(&s2.b - &b1l), 2);
    Ok(du.max(db))
}
