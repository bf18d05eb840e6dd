use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::grid::{norm_sq, Grid, Mode};
use crate::error::{Error, Result};

/// Real 3-component periodic field stored as Fourier coefficients.
///
/// `f(x) = Σ_m c(m) e^{i m·x}`, so `v cos(k·x)` is stored as `v/2` at `±k`.
/// Coefficients outside the grid band are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVectorField {
    grid: Grid,
    coeffs: [Vec<Complex64>; 3],
}

/// Samples of a real vector field on the collocation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalVectorField {
    grid: Grid,
    values: [Vec<f64>; 3],
}

impl PhysicalVectorField {
    pub fn new(grid: Grid, values: [Vec<f64>; 3]) -> Result<Self> {
        if values.iter().any(|v| v.len() != grid.len()) {
            return Err(Error::MalformedField(format!(
                "expected {} samples per component",
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(x)` at every grid point.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let d = grid.dims();
        let mut values = [
            vec![0.0; grid.len()],
            vec![0.0; grid.len()],
            vec![0.0; grid.len()],
        ];
        for i1 in 0..d[0] {
            for i2 in 0..d[1] {
                for i3 in 0..d[2] {
                    let x = [
                        Grid::coordinate(i1, d[0]),
                        Grid::coordinate(i2, d[1]),
                        Grid::coordinate(i3, d[2]),
                    ];
                    let v = f(x);
                    let idx = grid.flat([i1, i2, i3]);
                    for a in 0..3 {
                        values[a][idx] = v[a];
                    }
                }
            }
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn component(&self, a: usize) -> &[f64] {
        &self.values[a]
    }

    pub fn value(&self, idx: usize) -> [f64; 3] {
        [self.values[0][idx], self.values[1][idx], self.values[2][idx]]
    }

    pub fn max_magnitude(&self) -> f64 {
        (0..self.grid.len())
            .map(|i| {
                let v = self.value(i);
                (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
            })
            .fold(0.0, f64::max)
    }
}

impl SpectralVectorField {
    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        Self {
            grid,
            coeffs: [
                vec![Complex64::default(); n],
                vec![Complex64::default(); n],
                vec![Complex64::default(); n],
            ],
        }
    }

    /// Wraps raw coefficient arrays, validating length, band and symmetry.
    pub fn from_coeffs(grid: Grid, coeffs: [Vec<Complex64>; 3]) -> Result<Self> {
        if coeffs.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::MalformedField(format!(
                "expected {} coefficients per component",
                grid.len()
            )));
        }
        let field = Self { grid, coeffs };
        for idx in 0..grid.len() {
            let m = grid.mode_at(idx);
            if !grid.contains(m) && (0..3).any(|a| field.coeffs[a][idx] != Complex64::default()) {
                return Err(Error::MalformedField(format!("nonzero coefficient outside band at {m:?}")));
            }
        }
        let defect = field.hermitian_defect();
        if defect > 1e-12 {
            return Err(Error::MalformedField(format!("Hermitian symmetry defect {defect:e}")));
        }
        Ok(field)
    }

    pub(crate) fn from_coeffs_unchecked(grid: Grid, coeffs: [Vec<Complex64>; 3]) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.len() == grid.len()));
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn component(&self, a: usize) -> &[Complex64] {
        &self.coeffs[a]
    }

    pub(crate) fn component_mut(&mut self, a: usize) -> &mut [Complex64] {
        &mut self.coeffs[a]
    }

    pub(crate) fn into_coeffs(self) -> [Vec<Complex64>; 3] {
        self.coeffs
    }

    pub fn coeff(&self, m: Mode) -> Option<[Complex64; 3]> {
        let idx = self.grid.index_of(m)?;
        Some([self.coeffs[0][idx], self.coeffs[1][idx], self.coeffs[2][idx]])
    }

    /// Adds `value` at `m` and its conjugate at `-m` (real part only at 0).
    pub fn add_mode(&mut self, m: Mode, value: [Complex64; 3]) -> Result<()> {
        let idx = self.grid.index_of(m).ok_or_else(|| Error::GridTooSmall {
            what: format!("mode {m:?}"),
            axis: (0..3)
                .find(|&a| m[a].abs() > self.grid.cutoff(a))
                .map(|a| a + 1)
                .unwrap_or(0),
            required: m.iter().map(|x| x.abs()).max().unwrap_or(0),
            available: self.grid.cutoffs().into_iter().max().unwrap_or(0),
        })?;
        if m == [0, 0, 0] {
            for a in 0..3 {
                self.coeffs[a][idx] += Complex64::new(value[a].re, 0.0);
            }
            return Ok(());
        }
        let jdx = self.grid.index_of([-m[0], -m[1], -m[2]]).expect("band is symmetric");
        for a in 0..3 {
            self.coeffs[a][idx] += value[a];
            self.coeffs[a][jdx] += value[a].conj();
        }
        Ok(())
    }

    /// Largest `|c(m) - conj(c(-m))|` relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for (idx, m) in self.grid.modes() {
            let jdx = self.grid.index_of([-m[0], -m[1], -m[2]]).expect("symmetric band");
            for a in 0..3 {
                worst = worst.max((self.coeffs[a][idx] - self.coeffs[a][jdx].conj()).norm());
            }
        }
        worst / scale
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|c| c.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.iter().all(|v| v.re == 0.0 && v.im == 0.0))
    }

    /// Spatial mean (the m = 0 coefficient), real part.
    pub fn mean(&self) -> [f64; 3] {
        let idx = self.grid.flat([0, 0, 0]);
        [self.coeffs[0][idx].re, self.coeffs[1][idx].re, self.coeffs[2][idx].re]
    }

    pub(crate) fn clear_mean(&mut self) {
        let idx = self.grid.flat([0, 0, 0]);
        for a in 0..3 {
            self.coeffs[a][idx] = Complex64::default();
        }
    }

    /// Multiplies every coefficient by `g(m)`.
    pub fn map_modes(&self, g: impl Fn(Mode) -> f64) -> Self {
        let mut out = self.clone();
        for (idx, m) in self.grid.modes() {
            let s = g(m);
            for a in 0..3 {
                out.coeffs[a][idx] *= s;
            }
        }
        out
    }

    /// Mean-square energy `½ Σ_m |c(m)|²` (volume-normalized).
    pub fn energy(&self) -> f64 {
        0.5 * self
            .coeffs
            .iter()
            .flat_map(|c| c.iter())
            .map(|c| c.norm_sqr())
            .sum::<f64>()
    }

    /// `Σ_m |m|^{2α} |c(m)|²`.
    pub fn dissipation(&self, alpha: f64) -> f64 {
        let mut acc = 0.0;
        for (idx, m) in self.grid.modes() {
            let k2 = norm_sq(m);
            if k2 == 0 {
                continue;
            }
            let w = (k2 as f64).powf(alpha);
            acc += w * (0..3).map(|a| self.coeffs[a][idx].norm_sqr()).sum::<f64>();
        }
        acc
    }

    /// Real inner product `⟨f, g⟩` normalized by the torus volume.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        (0..3)
            .map(|a| {
                self.coeffs[a]
                    .iter()
                    .zip(other.coeffs[a].iter())
                    .map(|(x, y)| (x * y.conj()).re)
                    .sum::<f64>()
            })
            .sum()
    }

    /// Per-axis largest |m| carrying a coefficient above `rel_tol` times the
    /// largest coefficient.
    pub fn active_band(&self, rel_tol: f64) -> [i64; 3] {
        let thresh = self.max_abs_coeff() * rel_tol;
        let mut band = [0i64; 3];
        if thresh == 0.0 && self.is_zero() {
            return band;
        }
        for (idx, m) in self.grid.modes() {
            if (0..3).any(|a| self.coeffs[a][idx].norm() > thresh) {
                for a in 0..3 {
                    band[a] = band[a].max(m[a].abs());
                }
            }
        }
        band
    }

    /// Largest `|m|` carrying a coefficient above `rel_tol` of the maximum.
    pub fn max_active_wavenumber(&self, rel_tol: f64) -> f64 {
        let thresh = self.max_abs_coeff() * rel_tol;
        let mut best = 0i64;
        for (idx, m) in self.grid.modes() {
            if (0..3).any(|a| self.coeffs[a][idx].norm() > thresh) {
                best = best.max(norm_sq(m));
            }
        }
        (best as f64).sqrt()
    }

    /// Largest coefficient magnitude on modes with m₂ ≠ 0.
    pub fn off_slab_max(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (idx, m) in self.grid.modes() {
            if m[1] != 0 {
                for a in 0..3 {
                    worst = worst.max(self.coeffs[a][idx].norm());
                }
            }
        }
        worst
    }

    /// Copies the field onto another grid; fails if a nonzero mode does not fit.
    pub fn transfer_to(&self, target: Grid) -> Result<Self> {
        let mut out = Self::zeros(target);
        for (idx, m) in self.grid.modes() {
            let c = [self.coeffs[0][idx], self.coeffs[1][idx], self.coeffs[2][idx]];
            if c.iter().all(|v| v.re == 0.0 && v.im == 0.0) {
                continue;
            }
            let jdx = target.index_of(m).ok_or_else(|| Error::GridTooSmall {
                what: format!("mode {m:?} during transfer"),
                axis: (0..3).find(|&a| m[a].abs() > target.cutoff(a)).map_or(0, |a| a + 1),
                required: m.iter().map(|x| x.abs()).max().unwrap_or(0),
                available: target.cutoffs().into_iter().max().unwrap_or(0),
            })?;
            for a in 0..3 {
                out.coeffs[a][jdx] = c[a];
            }
        }
        Ok(out)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let mut out = self.clone();
        for a in 0..3 {
            for (x, y) in out.coeffs[a].iter_mut().zip(other.coeffs[a].iter()) {
                *x += y * s;
            }
        }
        out
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| c.iter_mut().for_each(|v| *v *= s));
        out
    }
}

impl Add for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn add(self, rhs: Self) -> SpectralVectorField {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn sub(self, rhs: Self) -> SpectralVectorField {
        self.axpy(-1.0, rhs)
    }
}

impl Mul<f64> for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn mul(self, rhs: f64) -> SpectralVectorField {
        self.scaled(rhs)
    }
}

impl Neg for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn neg(self) -> SpectralVectorField {
        self.scaled(-1.0)
    }
}
