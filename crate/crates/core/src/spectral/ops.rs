use num_complex::Complex64;

use super::fft::{analyze_real, render_real};
use super::field::{PhysicalVectorField, SpectralVectorField};
use super::grid::{norm_sq, Grid, Mode};
use super::trig::TrigPolynomial;
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const DIVERGENCE_TOL: f64 = 1e-10;

pub fn to_physical(f: &SpectralVectorField) -> Result<PhysicalVectorField> {
    let defect = f.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::MalformedField(format!(
            "Hermitian symmetry violated (relative defect {defect:.3e})"
        )));
    }
    let grid = *f.grid();
    let mut v = render_real(
        &grid,
        &[f.component(0), f.component(1), f.component(2)],
        grid.dims(),
    )
    .into_iter();
    let values = [v.next().unwrap(), v.next().unwrap(), v.next().unwrap()];
    PhysicalVectorField::new(grid, values)
}

/// Forward transform truncated to the retained band; the Nyquist plane and
/// anything beyond the cutoff are discarded.
pub fn to_spectral(p: &PhysicalVectorField) -> SpectralVectorField {
    let grid = *p.grid();
    let mut c = analyze_real(
        &grid,
        &[p.component(0), p.component(1), p.component(2)],
        grid.dims(),
    )
    .into_iter();
    SpectralVectorField::from_coeffs_unchecked(grid, [c.next().unwrap(), c.next().unwrap(), c.next().unwrap()])
}

/// `c(m) - m (m·c(m)) / |m|²`, with the mean passed through.
pub fn leray_project(f: &SpectralVectorField) -> SpectralVectorField {
    let mut out = f.clone();
    project_in_place(&mut out);
    out
}

pub(crate) fn project_in_place(f: &mut SpectralVectorField) {
    let grid = *f.grid();
    for (idx, m) in grid.modes() {
        let k2 = norm_sq(m);
        if k2 == 0 {
            continue;
        }
        let c = [f.component(0)[idx], f.component(1)[idx], f.component(2)[idx]];
        let dot = c[0] * m[0] as f64 + c[1] * m[1] as f64 + c[2] * m[2] as f64;
        let s = dot / k2 as f64;
        for a in 0..3 {
            f.component_mut(a)[idx] = c[a] - s * m[a] as f64;
        }
    }
}

/// Multiplier `e^{-|m|^{2α} t}`.
pub fn fractional_semigroup(f: &SpectralVectorField, t: f64, alpha: f64) -> Result<SpectralVectorField> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("semigroup time must be finite and nonnegative, got {t}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("semigroup power must be positive, got {alpha}")));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    Ok(f.map_modes(|m| symbol(m, alpha, t)))
}

pub(crate) fn symbol(m: Mode, alpha: f64, t: f64) -> f64 {
    let k2 = norm_sq(m);
    if k2 == 0 {
        1.0
    } else {
        (-(k2 as f64).powf(alpha) * t).exp()
    }
}

/// `max_m |m·c(m)|`.
pub fn divergence_max(f: &SpectralVectorField) -> f64 {
    let mut worst: f64 = 0.0;
    for (idx, m) in f.grid().modes() {
        let d = f.component(0)[idx] * m[0] as f64
            + f.component(1)[idx] * m[1] as f64
            + f.component(2)[idx] * m[2] as f64;
        worst = worst.max(d.norm());
    }
    worst
}

/// `max_m |m| |c(m)|`, the natural scale for `divergence_max`.
pub(crate) fn gradient_scale(f: &SpectralVectorField) -> f64 {
    let mut s: f64 = 0.0;
    for (idx, m) in f.grid().modes() {
        let k = (norm_sq(m) as f64).sqrt();
        for a in 0..3 {
            s = s.max(k * f.component(a)[idx].norm());
        }
    }
    s
}

pub(crate) fn check_divergence_free(f: &SpectralVectorField, what: &str) -> Result<()> {
    let d = divergence_max(f);
    let tol = DIVERGENCE_TOL * gradient_scale(f).max(1.0);
    if d > tol {
        return Err(Error::Precondition(format!(
            "{what} is not divergence-free (max |m·c| = {d:.3e})"
        )));
    }
    Ok(())
}

/// Spectral derivative `∂_j` of every component.
pub(crate) fn derivative(f: &SpectralVectorField, j: usize) -> [Vec<Complex64>; 3] {
    let grid = *f.grid();
    let mut out = [
        vec![Complex64::default(); grid.len()],
        vec![Complex64::default(); grid.len()],
        vec![Complex64::default(); grid.len()],
    ];
    for (idx, m) in grid.modes() {
        if m[j] == 0 {
            continue;
        }
        let ik = Complex64::new(0.0, m[j] as f64);
        for a in 0..3 {
            out[a][idx] = ik * f.component(a)[idx];
        }
    }
    out
}

/// `(u·∇)v`, evaluated on the 3/2-padded grid and truncated back to the band.
pub fn advect(u: &SpectralVectorField, v: &SpectralVectorField) -> Result<SpectralVectorField> {
    if u.grid() != v.grid() {
        return Err(Error::Grid("advect: fields live on different grids".into()));
    }
    check_divergence_free(u, "advecting field")?;
    let grid = *u.grid();
    let pd = grid.padded_dims();
    let uu = render_real(&grid, &[u.component(0), u.component(1), u.component(2)], pd);
    let n: usize = pd.iter().product();
    let mut acc = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for j in 0..3 {
        if grid.cutoff(j) == 0 {
            continue;
        }
        let d = derivative(v, j);
        let dv = render_real(&grid, &[&d[0], &d[1], &d[2]], pd);
        for a in 0..3 {
            for ((o, x), y) in acc[a].iter_mut().zip(&uu[j]).zip(&dv[a]) {
                *o += x * y;
            }
        }
    }
    let mut c = analyze_real(&grid, &[&acc[0], &acc[1], &acc[2]], pd).into_iter();
    Ok(SpectralVectorField::from_coeffs_unchecked(
        grid,
        [c.next().unwrap(), c.next().unwrap(), c.next().unwrap()],
    ))
}

/// Maximum of `|f|` over the collocation points.
pub fn sup_norm(f: &SpectralVectorField) -> f64 {
    let grid = *f.grid();
    let v = render_real(&grid, &[f.component(0), f.component(1), f.component(2)], grid.dims());
    (0..v[0].len())
        .map(|i| (v[0][i] * v[0][i] + v[1][i] * v[1][i] + v[2][i] * v[2][i]).sqrt())
        .fold(0.0, f64::max)
}

/// Maximum of `|f|` over the torus, sampled with `oversample` points per
/// half wavelength of the highest active mode and polished off-grid.
pub fn sup_norm_refined(f: &SpectralVectorField, oversample: usize) -> f64 {
    TrigPolynomial::from_field(f, 1e-14).sup_norm(oversample).value
}

/// Grid sized for `band` with room for quadratic products.
pub fn grid_for_band(band: [i64; 3], slab: bool) -> Result<Grid> {
    let size = |b: i64| {
        let mut n = 2 * (b as usize + 1);
        n = n.max(4);
        super::trig::fast_len(n)
    };
    if slab {
        Grid::slab(size(band[0]), size(band[2]))
    } else {
        Grid::full(size(band[0]), size(band[1]), size(band[2]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cos_mode(g: Grid, k: Mode, v: [f64; 3]) -> SpectralVectorField {
        let mut f = SpectralVectorField::zeros(g);
        f.add_mode(k, v.map(|x| Complex64::new(0.5 * x, 0.0))).unwrap();
        f
    }

    #[test]
    fn cosine_mode_renders_as_cosine() {
        let g = Grid::slab(16, 8).unwrap();
        let f = cos_mode(g, [1, 0, 0], [0.0, 0.0, 1.0]);
        let p = to_physical(&f).unwrap();
        let d = g.dims();
        for i1 in 0..d[0] {
            let idx = g.flat([i1, 0, 3]);
            let x = Grid::coordinate(i1, d[0]);
            assert!((p.value(idx)[2] - x.cos()).abs() < 1e-14);
            assert_eq!(p.value(idx)[0], 0.0);
        }
    }

    #[test]
    fn cos2x_samples_give_half_coefficients() {
        let g = Grid::full(8, 4, 4).unwrap();
        let p = PhysicalVectorField::from_fn(g, |x| [0.0, 0.0, (2.0 * x[0]).cos()]);
        let f = to_spectral(&p);
        for (idx, m) in g.modes() {
            let expect = if m == [2, 0, 0] || m == [-2, 0, 0] { 0.5 } else { 0.0 };
            assert!((f.component(2)[idx].re - expect).abs() < 1e-15, "{m:?}");
            assert!(f.component(2)[idx].im.abs() < 1e-15);
            assert!(f.component(0)[idx].norm() < 1e-15);
        }
    }

    #[test]
    fn constant_field_has_only_mean() {
        let g = Grid::slab(8, 8).unwrap();
        let p = PhysicalVectorField::from_fn(g, |_| [1.5, -2.0, 0.25]);
        let f = to_spectral(&p);
        assert_eq!(f.mean(), [1.5, -2.0, 0.25]);
        let mut g0 = f.clone();
        g0.clear_mean();
        assert!(g0.max_abs_coeff() < 1e-15);
    }

    #[test]
    fn asymmetric_coefficients_are_rejected() {
        let g = Grid::slab(8, 8).unwrap();
        let mut c = SpectralVectorField::zeros(g).into_coeffs();
        c[0][g.index_of([1, 0, 0]).unwrap()] = Complex64::new(1.0, 0.0);
        let f = SpectralVectorField::from_coeffs_unchecked(g, c);
        assert!(matches!(to_physical(&f), Err(Error::MalformedField(_))));
    }

    #[test]
    fn leray_hand_example() {
        // w sin(2 x3), w = (0,1,1): stored as -i w/2 at (0,0,2).
        let g = Grid::full(8, 8, 8).unwrap();
        let mut f = SpectralVectorField::zeros(g);
        let h = Complex64::new(0.0, -0.5);
        f.add_mode([0, 0, 2], [Complex64::default(), h, h]).unwrap();
        let p = leray_project(&f);
        let c = p.coeff([0, 0, 2]).unwrap();
        assert_eq!(c[0], Complex64::default());
        assert!((c[1] - h).norm() < 1e-16);
        assert!(c[2].norm() < 1e-16);
    }

    #[test]
    fn leray_kills_gradients_and_keeps_solenoidal() {
        let g = Grid::slab(16, 16).unwrap();
        let grad = cos_mode(g, [2, 0, 1], [2.0, 0.0, 1.0]);
        assert!(leray_project(&grad).max_abs_coeff() < 1e-16);
        let sol = cos_mode(g, [2, 0, 1], [0.0, 3.0, 0.0]);
        assert_eq!(leray_project(&sol), sol);
    }

    #[test]
    fn semigroup_factor_and_domain() {
        let g = Grid::slab(16, 8).unwrap();
        let f = cos_mode(g, [2, 0, 0], [0.0, 0.0, 1.0]);
        let s = fractional_semigroup(&f, 0.25, 1.0).unwrap();
        let c = s.coeff([2, 0, 0]).unwrap()[2].re;
        assert!((2.0 * c - 0.367_879_441_171_442_3).abs() < 1e-15);
        assert!(matches!(fractional_semigroup(&f, -1e-3, 1.0), Err(Error::Domain(_))));
        assert_eq!(fractional_semigroup(&f, 0.0, 1.3).unwrap(), f);
    }

    #[test]
    fn divergence_of_gradient_mode() {
        let g = Grid::slab(16, 8).unwrap();
        let f = cos_mode(g, [2, 0, 0], [2.0, 0.0, 0.0]);
        assert!((divergence_max(&f) - 2.0).abs() < 1e-15);
        let f = cos_mode(g, [2, 0, 0], [1.0, 0.0, 0.0]);
        assert!((divergence_max(&f) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn advect_product_to_sum() {
        // u = v1 cos(k1·x), v = v2 cos(k2·x), k2·v1 = 1.
        let g = Grid::slab(32, 8).unwrap();
        let u = cos_mode(g, [4, 0, 0], [0.0, 0.0, 1.0]);
        let v = cos_mode(g, [4, 0, 1], [0.0, 1.0, 0.0]);
        let a = advect(&u, &v).unwrap();
        // -(1/2) v2 [sin((k1+k2)·x) + sin((k2-k1)·x)]; sin stored as -i/2 at +m.
        let expect = Complex64::new(0.0, 0.25);
        for m in [[8, 0, 1], [0, 0, 1]] {
            let c = a.coeff(m).unwrap();
            assert!((c[1] - expect).norm() < 1e-14, "{m:?}: {:?}", c[1]);
        }
        let mut rest = a.clone();
        for m in [[8, 0, 1], [0, 0, 1]] {
            let z = a.coeff(m).unwrap().map(|c| -c);
            rest.add_mode(m, z).unwrap();
        }
        assert!(rest.max_abs_coeff() < 1e-14);
    }

    #[test]
    fn advect_requires_solenoidal_velocity() {
        let g = Grid::slab(16, 8).unwrap();
        let u = cos_mode(g, [1, 0, 0], [1.0, 0.0, 0.0]);
        assert!(matches!(advect(&u, &u), Err(Error::Precondition(_))));
    }

    #[test]
    fn sup_norm_examples() {
        let g = Grid::slab(16, 16).unwrap();
        assert_eq!(sup_norm(&SpectralVectorField::zeros(g)), 0.0);
        let f = cos_mode(g, [3, 0, 0], [0.6, 0.0, 0.8]);
        assert!((sup_norm(&f) - 1.0).abs() < 1e-14);
        let mut cs = cos_mode(g, [3, 0, 0], [0.0, 1.0, 0.0]);
        cs.add_mode([3, 0, 0], [Complex64::default(), Complex64::new(0.0, -0.5), Complex64::default()])
            .unwrap();
        assert!((sup_norm_refined(&cs, 4) - 2f64.sqrt()).abs() < 1e-3);
        assert!((sup_norm_refined(&cs, 4) - 2f64.sqrt()).abs() < 1e-12);
    }
}
