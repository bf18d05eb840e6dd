use crate::error::{Error, Result};
use crate::plane_wave::{PlaneWave, WaveSum};
use crate::spectral::{Grid, SpectralVectorField};

use super::params::{InflationParams, V, V_PRIME};

/// `u₀ = r^{-β₁} Σ |k_i|^{θ₁} v cos(k_i·x)` and
/// `b₀ = r^{-β₂} Σ |k'_i|^{θ₂} v' cos(k'_i·x)` as plane-wave sums.
pub fn initial_waves(p: &InflationParams) -> (WaveSum, WaveSum) {
    let r = p.r as f64;
    let u = p
        .ks()
        .into_iter()
        .map(|k| PlaneWave::cosine(r.powf(-p.beta1) * k.norm().powf(p.theta1), V, k))
        .collect();
    let b = p
        .k_primes()
        .into_iter()
        .map(|k| PlaneWave::cosine(r.powf(-p.beta2) * k.norm().powf(p.theta2), V_PRIME, k))
        .collect();
    (WaveSum::new(u), WaveSum::new(b))
}

/// Smallest per-axis cutoffs that hold the data and every first-generation
/// interaction mode `k'_j ± k_i`.
pub fn required_cutoffs(p: &InflationParams) -> [i128; 3] {
    [2 * p.top_wavenumber(), 0, 1]
}

/// Renders the initial data on `grid`, which must hold the first-generation
/// interaction modes (axis-1 cutoff at least `2|k_r|`).
pub fn build_initial_data(p: &InflationParams, grid: Grid) -> Result<(SpectralVectorField, SpectralVectorField)> {
    let need = required_cutoffs(p);
    for axis in [0usize, 2] {
        let have = grid.cutoff(axis) as i128;
        if have < need[axis] {
            let n = 2 * (need[axis] + 1);
            return Err(Error::GridTooSmall {
                what: format!("construction with r = {}, K = {} (needs n{} >= {n})", p.r, p.k_base, axis + 1),
                axis: axis + 1,
                required: i64::try_from(need[axis]).unwrap_or(i64::MAX),
                available: have as i64,
            });
        }
    }
    let (u, b) = initial_waves(p);
    Ok((u.to_field(grid)?, b.to_field(grid)?))
}

/// Smallest slab grid accepted by [`build_initial_data`], with FFT-friendly
/// sizes.
pub fn minimal_slab_grid(p: &InflationParams) -> Result<Grid> {
    let need = required_cutoffs(p);
    let n1 = usize::try_from(2 * (need[0] + 1))
        .map_err(|_| Error::Grid("ladder too large for a grid".into()))?;
    crate::spectral::grid_for_band([need[0] as i64, 0, need[2] as i64], true)
        .map(|g| {
            debug_assert!(g.dims()[0] >= n1);
            g
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::derive_params;
    use crate::spectral::{divergence_max, sup_norm};
    use num_complex::Complex64;

    fn r2k4() -> InflationParams {
        derive_params(1.0, 1.0, 0.1, 2, Some(1.0)).unwrap().with_k_base(4).unwrap()
    }

    #[test]
    fn r2_k4_coefficients() {
        let p = r2k4();
        let g = Grid::slab(64, 8).unwrap();
        let (u, b) = build_initial_data(&p, g).unwrap();
        let s = 2f64.powf(-0.4);
        let c = |f: &SpectralVectorField, m, a: usize| f.coeff(m).unwrap()[a];
        assert!((c(&u, [4, 0, 0], 2) - Complex64::new(0.5 * 4.0 * s, 0.0)).norm() < 1e-15);
        assert!((c(&u, [8, 0, 0], 2) - Complex64::new(0.5 * 8.0 * s, 0.0)).norm() < 1e-15);
        assert!((c(&b, [4, 0, 1], 1) - Complex64::new(0.5 * 17f64.sqrt() * s, 0.0)).norm() < 1e-15);
        assert!((c(&b, [-8, 0, -1], 1) - Complex64::new(0.5 * 65f64.sqrt() * s, 0.0)).norm() < 1e-15);
        assert_eq!(divergence_max(&u), 0.0);
        assert_eq!(divergence_max(&b), 0.0);
        assert_eq!(u.mean(), [0.0; 3]);
        assert!((sup_norm(&u) - 12.0 * s).abs() < 1e-13);
    }

    #[test]
    fn small_grid_is_rejected() {
        let p = r2k4();
        match build_initial_data(&p, Grid::slab(32, 8).unwrap()) {
            Err(Error::GridTooSmall { axis, required, .. }) => assert_eq!((axis, required), (1, 16)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn minimal_grid_is_accepted() {
        let p = derive_params(1.0, 1.0, 0.1, 6, None).unwrap();
        let g = minimal_slab_grid(&p).unwrap();
        assert!(build_initial_data(&p, g).is_ok());
    }
}
