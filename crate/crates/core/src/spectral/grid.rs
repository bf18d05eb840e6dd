use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer wavevector on the lattice Z³.
pub type Mode = [i64; 3];

/// Periodic grid on the 2π-torus.
///
/// Each axis stores `n` Fourier modes with wavenumbers `-n/2+1 ..= n/2-1`
/// (the Nyquist slot is kept at zero). Products are evaluated on a
/// `3n/2` padded grid, which is the 2/3 truncation rule seen from the
/// padded side. In slab mode the second axis has a single point and
/// fields do not depend on x₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    n: [usize; 3],
    slab: bool,
}

impl Grid {
    pub fn new(n1: usize, n2: usize, n3: usize, slab: bool) -> Result<Self> {
        for (axis, &n) in [n1, n3].iter().enumerate() {
            if n < 4 || n % 2 != 0 {
                return Err(Error::Grid(format!(
                    "axis {} needs an even size >= 4, got {n}",
                    if axis == 0 { 1 } else { 3 }
                )));
            }
        }
        if slab {
            if n2 != 1 {
                return Err(Error::Grid(format!("slab mode requires n2 = 1, got {n2}")));
            }
        } else if n2 < 4 || n2 % 2 != 0 {
            return Err(Error::Grid(format!("axis 2 needs an even size >= 4, got {n2}")));
        }
        Ok(Self { n: [n1, n2, n3], slab })
    }

    pub fn slab(n1: usize, n3: usize) -> Result<Self> {
        Self::new(n1, 1, n3, true)
    }

    pub fn full(n1: usize, n2: usize, n3: usize) -> Result<Self> {
        Self::new(n1, n2, n3, false)
    }

    #[inline]
    pub fn dims(&self) -> [usize; 3] {
        self.n
    }

    #[inline]
    pub fn is_slab(&self) -> bool {
        self.slab
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest retained |m| along `axis` (0-based).
    #[inline]
    pub fn cutoff(&self, axis: usize) -> i64 {
        let n = self.n[axis];
        if n == 1 {
            0
        } else {
            (n / 2) as i64 - 1
        }
    }

    pub fn cutoffs(&self) -> [i64; 3] {
        [self.cutoff(0), self.cutoff(1), self.cutoff(2)]
    }

    /// Dimensions of the dealiasing grid used for quadratic products.
    pub fn padded_dims(&self) -> [usize; 3] {
        self.n.map(|n| if n == 1 { 1 } else { 3 * n / 2 })
    }

    #[inline]
    pub fn contains(&self, m: Mode) -> bool {
        (0..3).all(|a| m[a].abs() <= self.cutoff(a))
    }

    #[inline]
    pub fn flat(&self, i: [usize; 3]) -> usize {
        (i[0] * self.n[1] + i[1]) * self.n[2] + i[2]
    }

    /// Flat storage index of a retained mode.
    #[inline]
    pub fn index_of(&self, m: Mode) -> Option<usize> {
        if !self.contains(m) {
            return None;
        }
        Some(self.flat(wrap_mode(m, self.n)))
    }

    /// Wavenumber stored at position `i` of an axis of length `n`.
    #[inline]
    pub fn wavenumber(i: usize, n: usize) -> i64 {
        if i < n.div_ceil(2) {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Mode stored at flat index `idx`.
    #[inline]
    pub fn mode_at(&self, idx: usize) -> Mode {
        let i3 = idx % self.n[2];
        let rest = idx / self.n[2];
        let i2 = rest % self.n[1];
        let i1 = rest / self.n[1];
        [
            Self::wavenumber(i1, self.n[0]),
            Self::wavenumber(i2, self.n[1]),
            Self::wavenumber(i3, self.n[2]),
        ]
    }

    /// Iterates `(flat index, mode)` over all retained modes.
    pub fn modes(&self) -> impl Iterator<Item = (usize, Mode)> + '_ {
        let c = self.cutoffs();
        (-c[0]..=c[0]).flat_map(move |m1| {
            (-c[1]..=c[1]).flat_map(move |m2| {
                (-c[2]..=c[2]).map(move |m3| {
                    let m = [m1, m2, m3];
                    (self.flat(wrap_mode(m, self.n)), m)
                })
            })
        })
    }

    /// Same grid with every non-degenerate axis multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        let f = factor.max(1);
        Self {
            n: self.n.map(|n| if n == 1 { 1 } else { n * f }),
            slab: self.slab,
        }
    }

    /// Coordinates of grid point `i` along an axis of `n` points.
    #[inline]
    pub fn coordinate(i: usize, n: usize) -> f64 {
        2.0 * std::f64::consts::PI * i as f64 / n as f64
    }
}

/// Storage position of mode `m` on an array of the given dimensions.
#[inline]
pub(crate) fn wrap_mode(m: Mode, dims: [usize; 3]) -> [usize; 3] {
    let mut out = [0usize; 3];
    for a in 0..3 {
        let n = dims[a] as i64;
        out[a] = m[a].rem_euclid(n) as usize;
    }
    out
}

#[inline]
pub fn dot(a: Mode, b: Mode) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm_sq(m: Mode) -> i64 {
    dot(m, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::slab(2, 8).is_err());
        assert!(Grid::slab(7, 8).is_err());
        assert!(Grid::new(8, 4, 8, true).is_err());
        assert!(Grid::full(8, 1, 8).is_err());
        assert!(Grid::full(8, 6, 8).is_ok());
    }

    #[test]
    fn cutoffs_and_padding() {
        let g = Grid::slab(16, 8).unwrap();
        assert_eq!(g.cutoffs(), [7, 0, 3]);
        assert_eq!(g.padded_dims(), [24, 1, 12]);
        assert!(g.contains([7, 0, -3]));
        assert!(!g.contains([8, 0, 0]));
        assert!(!g.contains([0, 1, 0]));
    }

    #[test]
    fn mode_index_round_trip() {
        let g = Grid::full(8, 4, 6).unwrap();
        for (idx, m) in g.modes() {
            assert_eq!(g.mode_at(idx), m);
            assert_eq!(g.index_of(m), Some(idx));
        }
        assert_eq!(g.modes().count(), 7 * 3 * 5);
    }
}
