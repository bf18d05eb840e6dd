//! Sparse trigonometric polynomials: point evaluation and accurate maxima of
//! band-limited fields, independent of the storage grid.

use num_complex::Complex64;
use rustfft::FftDirection;

use super::fft::fft3;
use super::field::SpectralVectorField;
use super::grid::{norm_sq, wrap_mode, Mode};

/// Real vector-valued trigonometric polynomial stored on the half lattice:
/// `f(x) = mean + 2 Re Σ_{m ∈ H} c(m) e^{i m·x}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    mean: [f64; 3],
    half: Vec<(Mode, [Complex64; 3])>,
}

/// Location and value of a maximum of `|f(x)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    pub location: [f64; 3],
}

fn in_upper_half(m: Mode) -> bool {
    m[0] > 0 || (m[0] == 0 && (m[1] > 0 || (m[1] == 0 && m[2] > 0)))
}

/// Smallest even `n' >= n` whose only prime factors are 2, 3 and 5.
pub(crate) fn fast_len(n: usize) -> usize {
    let mut k = n.max(2);
    loop {
        if k % 2 == 0 {
            let mut r = k;
            for p in [2, 3, 5] {
                while r % p == 0 {
                    r /= p;
                }
            }
            if r == 1 {
                return k;
            }
        }
        k += 1;
    }
}

impl TrigPolynomial {
    /// Keeps modes whose largest component exceeds `rel_tol` times the
    /// largest coefficient of the field (`rel_tol = 0` keeps every nonzero).
    pub fn from_field(f: &SpectralVectorField, rel_tol: f64) -> Self {
        let thresh = f.max_abs_coeff() * rel_tol;
        let mut half = Vec::new();
        for (idx, m) in f.grid().modes() {
            if !in_upper_half(m) {
                continue;
            }
            let c = [f.component(0)[idx], f.component(1)[idx], f.component(2)[idx]];
            let big = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if big > thresh && big > 0.0 {
                half.push((m, c));
            }
        }
        Self { mean: f.mean(), half }
    }

    pub fn len(&self) -> usize {
        self.half.len()
    }

    pub fn is_empty(&self) -> bool {
        self.half.is_empty() && self.mean.iter().all(|&v| v == 0.0)
    }

    pub fn mean(&self) -> [f64; 3] {
        self.mean
    }

    pub fn modes(&self) -> impl Iterator<Item = &(Mode, [Complex64; 3])> {
        self.half.iter()
    }

    /// `|m|^{2α}` for every stored mode, aligned with the storage order.
    pub fn decay_rates(&self, alpha: f64) -> Vec<f64> {
        self.half
            .iter()
            .map(|(m, _)| (norm_sq(*m) as f64).powf(alpha))
            .collect()
    }

    /// Coefficients multiplied by `e^{-rate·t}`, dropping modes that fall
    /// below `1e-16` of the largest surviving coefficient.
    pub fn damped(&self, rates: &[f64], t: f64) -> Self {
        let scaled: Vec<(Mode, [Complex64; 3], f64)> = self
            .half
            .iter()
            .zip(rates)
            .map(|((m, c), &rate)| {
                let s = (-rate * t).exp();
                let c = c.map(|v| v * s);
                let big = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
                (*m, c, big)
            })
            .collect();
        let top = scaled.iter().map(|x| x.2).fold(0.0, f64::max);
        let top = top.max(self.mean.iter().map(|v| v.abs()).fold(0.0, f64::max));
        let thresh = top * 1e-16;
        Self {
            mean: self.mean,
            half: scaled
                .into_iter()
                .filter(|x| x.2 > thresh)
                .map(|(m, c, _)| (m, c))
                .collect(),
        }
    }

    /// Per-axis largest |m| present.
    pub fn band(&self) -> [i64; 3] {
        let mut b = [0i64; 3];
        for (m, _) in &self.half {
            for a in 0..3 {
                b[a] = b[a].max(m[a].abs());
            }
        }
        b
    }

    pub fn eval(&self, x: [f64; 3]) -> [f64; 3] {
        let mut acc = [0.0f64; 3];
        for (m, c) in &self.half {
            let phase = m[0] as f64 * x[0] + m[1] as f64 * x[1] + m[2] as f64 * x[2];
            let (s, co) = phase.sin_cos();
            for a in 0..3 {
                acc[a] += c[a].re * co - c[a].im * s;
            }
        }
        [
            self.mean[0] + 2.0 * acc[0],
            self.mean[1] + 2.0 * acc[1],
            self.mean[2] + 2.0 * acc[2],
        ]
    }

    fn magnitude_sq(&self, x: [f64; 3]) -> f64 {
        let v = self.eval(x);
        v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
    }

    /// Samples on a uniform grid of dimensions `dims`; every axis must hold
    /// at least `2·band + 1` points so nothing aliases.
    pub fn render(&self, dims: [usize; 3]) -> [Vec<f64>; 3] {
        let n: usize = dims.iter().product();
        let at = |m: Mode| {
            let w = wrap_mode(m, dims);
            (w[0] * dims[1] + w[1]) * dims[2] + w[2]
        };
        let mut out: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        let mut buf = vec![Complex64::default(); n];
        for (pair, comps) in [(0usize, Some(1usize)), (2, None)] {
            buf.iter_mut().for_each(|v| *v = Complex64::default());
            let i = Complex64::new(0.0, 1.0);
            buf[0] += Complex64::new(self.mean[pair], 0.0);
            if let Some(q) = comps {
                buf[0] += i * self.mean[q];
            }
            for (m, c) in &self.half {
                let neg = [-m[0], -m[1], -m[2]];
                let (p, pn) = (at(*m), at(neg));
                buf[p] += c[pair];
                buf[pn] += c[pair].conj();
                if let Some(q) = comps {
                    buf[p] += i * c[q];
                    buf[pn] += i * c[q].conj();
                }
            }
            fft3(&mut buf, dims, FftDirection::Inverse);
            out[pair] = buf.iter().map(|v| v.re).collect();
            if let Some(q) = comps {
                out[q] = buf.iter().map(|v| v.im).collect();
            }
        }
        out
    }

    /// Maximum of `|f|` over the torus: sampled on a grid with about
    /// `oversample` points per half wavelength of the highest mode, then
    /// polished by coordinate-wise golden-section search around the best
    /// samples.
    pub fn sup_norm(&self, oversample: usize) -> SupEstimate {
        if self.half.is_empty() {
            let v = self.mean;
            return SupEstimate {
                value: (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt(),
                location: [0.0; 3],
            };
        }
        let band = self.band();
        let dims = band.map(|b| {
            if b == 0 {
                1
            } else {
                fast_len((2 * oversample.max(1) * b as usize).max(2 * b as usize + 2))
            }
        });
        let samples = self.render(dims);
        let n = samples[0].len();

        const CANDIDATES: usize = 4;
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(CANDIDATES + 1);
        for idx in 0..n {
            let v = samples[0][idx].powi(2) + samples[1][idx].powi(2) + samples[2][idx].powi(2);
            if best.len() < CANDIDATES || v > best[best.len() - 1].0 {
                best.push((v, idx));
                best.sort_by(|a, b| b.0.total_cmp(&a.0));
                best.truncate(CANDIDATES);
            }
        }

        let h = dims.map(|d| 2.0 * std::f64::consts::PI / d as f64);
        let mut result = SupEstimate { value: best[0].0.sqrt(), location: [0.0; 3] };
        for &(v0, idx) in &best {
            let i3 = idx % dims[2];
            let i2 = (idx / dims[2]) % dims[1];
            let i1 = idx / (dims[1] * dims[2]);
            let mut x = [i1 as f64 * h[0], i2 as f64 * h[1], i3 as f64 * h[2]];
            let mut val = v0;
            for _sweep in 0..2 {
                for a in 0..3 {
                    if band[a] == 0 {
                        continue;
                    }
                    let (xa, va) = golden_max(
                        |s| {
                            let mut y = x;
                            y[a] = s;
                            self.magnitude_sq(y)
                        },
                        x[a] - h[a],
                        x[a] + h[a],
                    );
                    if va > val {
                        val = va;
                        x[a] = xa;
                    }
                }
            }
            if val.sqrt() > result.value {
                result = SupEstimate { value: val.sqrt(), location: x };
            } else if result.location == [0.0; 3] && v0.sqrt() >= result.value {
                result.location = x;
            }
        }
        result
    }
}

/// Golden-section search for a maximum of `g` on `[lo, hi]`.
pub(crate) fn golden_max(mut g: impl FnMut(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..40 {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
    }
    if gc > gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn fast_len_is_smooth_and_even() {
        assert_eq!(fast_len(7), 8);
        assert_eq!(fast_len(17), 18);
        assert_eq!(fast_len(31), 32);
        assert_eq!(fast_len(121), 128);
        assert_eq!(fast_len(1), 2);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| 1.0 - (x - 0.3).powi(2), -1.0, 2.0);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eval_matches_definition() {
        let g = Grid::slab(16, 16).unwrap();
        let mut f = SpectralVectorField::zeros(g);
        let half = Complex64::new(0.5, 0.0);
        let z = Complex64::default();
        f.add_mode([3, 0, 1], [z, z, half]).unwrap();
        let p = TrigPolynomial::from_field(&f, 0.0);
        let x = [0.4, 0.0, 1.3];
        let v = p.eval(x);
        assert!((v[2] - (3.0 * 0.4 + 1.3f64).cos()).abs() < 1e-14);
        assert_eq!(v[0], 0.0);
    }

    #[test]
    fn sup_of_off_grid_peak_is_polished() {
        // cos(x1) + sin(x1) peaks at pi/4 with value sqrt(2); use a band that
        // puts the peak off the sampling grid.
        let g = Grid::slab(16, 8).unwrap();
        let mut f = SpectralVectorField::zeros(g);
        let z = Complex64::default();
        f.add_mode([3, 0, 0], [Complex64::new(0.5, -0.5), z, z]).unwrap();
        let p = TrigPolynomial::from_field(&f, 0.0);
        let s = p.sup_norm(1);
        assert!((s.value - 2f64.sqrt()).abs() < 1e-12, "{}", s.value);
    }
}
