//! Multi-dimensional complex FFTs over row-major `[d1, d2, d3]` arrays, and
//! the real-field packing used to transform two real fields per complex pass.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::grid::{wrap_mode, Grid};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(n, direction))
}

const BATCH: usize = 32;

/// Unnormalized in-place transform along every axis of length > 1.
pub(crate) fn fft3(data: &mut [Complex64], dims: [usize; 3], direction: FftDirection) {
    debug_assert_eq!(data.len(), dims.iter().product::<usize>());
    for axis in (0..3).rev() {
        let len = dims[axis];
        if len <= 1 {
            continue;
        }
        let inner: usize = dims[axis + 1..].iter().product();
        let outer: usize = dims[..axis].iter().product();
        let fft = plan(len, direction);
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        if inner == 1 {
            fft.process_with_scratch(data, &mut scratch);
            continue;
        }
        let mut buf = vec![Complex64::default(); len * BATCH.min(inner)];
        for o in 0..outer {
            let block = &mut data[o * len * inner..(o + 1) * len * inner];
            let mut j0 = 0;
            while j0 < inner {
                let nb = BATCH.min(inner - j0);
                let cols = &mut buf[..nb * len];
                for l in 0..len {
                    let row = &block[l * inner + j0..l * inner + j0 + nb];
                    for (b, v) in row.iter().enumerate() {
                        cols[b * len + l] = *v;
                    }
                }
                fft.process_with_scratch(cols, &mut scratch);
                for l in 0..len {
                    let row = &mut block[l * inner + j0..l * inner + j0 + nb];
                    for (b, v) in row.iter_mut().enumerate() {
                        *v = cols[b * len + l];
                    }
                }
                j0 += nb;
            }
        }
    }
}

/// Places the retained modes of `coeffs` (stored on `grid`) into a zeroed
/// array of dimensions `dims`, adding `scale * coeffs` into `out`.
fn scatter_into(out: &mut [Complex64], dims: [usize; 3], grid: &Grid, coeffs: &[Complex64], scale: Complex64) {
    for (idx, m) in grid.modes() {
        let c = coeffs[idx];
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        let w = wrap_mode(m, dims);
        out[(w[0] * dims[1] + w[1]) * dims[2] + w[2]] += c * scale;
    }
}

/// Evaluates real fields given by spectral coefficients on a uniform grid of
/// dimensions `dims` (each at least the grid's band). Fields are packed in
/// pairs as the real and imaginary part of one complex inverse transform.
pub(crate) fn render_real(grid: &Grid, fields: &[&[Complex64]], dims: [usize; 3]) -> Vec<Vec<f64>> {
    let n: usize = dims.iter().product();
    let mut out = Vec::with_capacity(fields.len());
    let mut buf = vec![Complex64::default(); n];
    for pair in fields.chunks(2) {
        buf.iter_mut().for_each(|v| *v = Complex64::default());
        scatter_into(&mut buf, dims, grid, pair[0], Complex64::new(1.0, 0.0));
        if let Some(second) = pair.get(1) {
            scatter_into(&mut buf, dims, grid, second, Complex64::new(0.0, 1.0));
        }
        fft3(&mut buf, dims, FftDirection::Inverse);
        out.push(buf.iter().map(|v| v.re).collect());
        if pair.len() == 2 {
            out.push(buf.iter().map(|v| v.im).collect());
        }
    }
    out
}

/// Forward transform of real sampled fields on `dims`, truncated to the
/// retained band of `grid`. The result is Hermitian by construction.
pub(crate) fn analyze_real(grid: &Grid, fields: &[&[f64]], dims: [usize; 3]) -> Vec<Vec<Complex64>> {
    let n: usize = dims.iter().product();
    let inv_n = 1.0 / n as f64;
    let mut out = Vec::with_capacity(fields.len());
    let mut buf = vec![Complex64::default(); n];
    let at = |m: [i64; 3]| {
        let w = wrap_mode(m, dims);
        (w[0] * dims[1] + w[1]) * dims[2] + w[2]
    };
    for pair in fields.chunks(2) {
        match pair.get(1) {
            Some(g) => {
                for ((b, f), g) in buf.iter_mut().zip(pair[0].iter()).zip(g.iter()) {
                    *b = Complex64::new(*f, *g);
                }
            }
            None => {
                for (b, f) in buf.iter_mut().zip(pair[0].iter()) {
                    *b = Complex64::new(*f, 0.0);
                }
            }
        }
        fft3(&mut buf, dims, FftDirection::Forward);
        let mut first = vec![Complex64::default(); grid.len()];
        let mut second = if pair.len() == 2 {
            vec![Complex64::default(); grid.len()]
        } else {
            Vec::new()
        };
        for (idx, m) in grid.modes() {
            let z = buf[at(m)] * inv_n;
            let zc = buf[at([-m[0], -m[1], -m[2]])].conj() * inv_n;
            first[idx] = (z + zc) * 0.5;
            if pair.len() == 2 {
                second[idx] = (z - zc) * Complex64::new(0.0, -0.5);
            }
        }
        out.push(first);
        if pair.len() == 2 {
            out.push(second);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_inverse_is_identity_up_to_scale() {
        let dims = [6, 4, 10];
        let n = 240;
        let orig: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut data = orig.clone();
        fft3(&mut data, dims, FftDirection::Forward);
        fft3(&mut data, dims, FftDirection::Inverse);
        for (a, b) in data.iter().zip(orig.iter()) {
            assert!((a / n as f64 - b).norm() < 1e-13);
        }
    }

    #[test]
    fn single_axis_matches_direct_dft() {
        let dims = [1, 1, 8];
        let x: Vec<Complex64> = (0..8).map(|i| Complex64::new(i as f64, 0.0)).collect();
        let mut y = x.clone();
        fft3(&mut y, dims, FftDirection::Forward);
        for k in 0..8 {
            let direct: Complex64 = (0..8)
                .map(|j| x[j] * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (j * k) as f64 / 8.0))
                .sum();
            assert!((direct - y[k]).norm() < 1e-12);
        }
    }
}
