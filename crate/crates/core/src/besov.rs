//! Caloric characterization of the homogeneous Besov norms `Ḃ^{-s}_{∞,∞}`:
//! `‖f‖ = sup_{t>0} t^{s/(2α)} ‖e^{-t(-Δ)^α} f‖_∞`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{golden_max, SpectralVectorField, TrigPolynomial};

/// Sampling window and exponents of one norm evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovSpec {
    pub s: f64,
    pub alpha: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub n_samples: usize,
}

pub const DEFAULT_SAMPLES: usize = 128;
pub const DEFAULT_T_MAX: f64 = 10.0;
/// Oversampling factor of the grid used for maxima of smoothed fields.
pub const SUP_OVERSAMPLE: usize = 4;
const ZERO_FIELD_T_MIN: f64 = 1e-6;
const MEAN_TOL: f64 = 1e-12;
/// Modes below this fraction of the largest coefficient are ignored.
const PRUNE_TOL: f64 = 1e-14;

impl BesovSpec {
    pub fn new(s: f64, alpha: f64, t_min: f64, t_max: f64, n_samples: usize) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::Domain(format!("Besov index must be positive, got {s}")));
        }
        if !(alpha >= 1.0) {
            return Err(Error::Domain(format!("caloric power must be >= 1, got {alpha}")));
        }
        if !(t_min > 0.0 && t_min < t_max && t_max.is_finite()) {
            return Err(Error::Domain(format!("invalid window [{t_min}, {t_max}]")));
        }
        if n_samples < 16 {
            return Err(Error::Domain(format!("need at least 16 samples, got {n_samples}")));
        }
        Ok(Self { s, alpha, t_min, t_max, n_samples })
    }

    /// `t_min = k^{-2α}/100` for the largest active wavenumber `k`,
    /// `t_max = 10`, 128 samples.
    pub fn default_for(f: &SpectralVectorField, s: f64, alpha: f64) -> Result<Self> {
        let (t_min, t_max) = default_window(f, alpha);
        Self::new(s, alpha, t_min, t_max, DEFAULT_SAMPLES)
    }
}

pub fn default_window(f: &SpectralVectorField, alpha: f64) -> (f64, f64) {
    let k = f.max_active_wavenumber(1e-10);
    let t_min = if k > 0.0 && !f.is_zero() {
        k.powf(-2.0 * alpha) / 100.0
    } else {
        ZERO_FIELD_T_MIN
    };
    (t_min, DEFAULT_T_MAX)
}

/// Norm value with the data needed to interpret it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovNorm {
    pub value: f64,
    pub t_star: f64,
    /// The maximizer sits on an edge of the window, so the window may be
    /// too narrow.
    pub at_boundary: bool,
    pub s: f64,
    pub alpha: f64,
    pub t_min: f64,
    pub t_max: f64,
}

/// `t ↦ ‖e^{-t(-Δ)^α} f‖_∞` sampled on a log-spaced window.
pub struct CaloricProfile {
    poly: TrigPolynomial,
    rates: Vec<f64>,
    alpha: f64,
    times: Vec<f64>,
    sups: Vec<f64>,
}

impl CaloricProfile {
    pub fn new(f: &SpectralVectorField, alpha: f64, t_min: f64, t_max: f64, n_samples: usize) -> Result<Self> {
        // validate the window once through BesovSpec::new
        BesovSpec::new(1.0, alpha, t_min, t_max, n_samples)?;
        let mean = f.mean();
        let scale = f.max_abs_coeff();
        if mean.iter().any(|m| m.abs() > MEAN_TOL * scale) {
            return Err(Error::Precondition(format!(
                "homogeneous Besov norm needs a zero-mean field, mean = {mean:?}"
            )));
        }
        let mut g = f.clone();
        g.clear_mean();
        let poly = TrigPolynomial::from_field(&g, PRUNE_TOL);
        let rates = poly.decay_rates(alpha);
        let (l0, l1) = (t_min.ln(), t_max.ln());
        let times: Vec<f64> = (0..n_samples)
            .map(|i| (l0 + (l1 - l0) * i as f64 / (n_samples - 1) as f64).exp())
            .collect();
        let mut p = Self { poly, rates, alpha, times, sups: Vec::new() };
        p.sups = p.times.par_iter().map(|&t| p.sup_at(t)).collect();
        Ok(p)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn sups(&self) -> &[f64] {
        &self.sups
    }

    pub fn sup_at(&self, t: f64) -> f64 {
        if self.poly.len() == 0 {
            return 0.0;
        }
        self.poly.damped(&self.rates, t).sup_norm(SUP_OVERSAMPLE).value
    }

    /// Maximum of `t^{s/(2α)} sup(t)` with golden-section refinement in
    /// `log t` around the best sample.
    pub fn norm(&self, s: f64) -> Result<BesovNorm> {
        if !(s > 0.0) {
            return Err(Error::Domain(format!("Besov index must be positive, got {s}")));
        }
        let p = s / (2.0 * self.alpha);
        let n = self.times.len();
        let (t_min, t_max) = (self.times[0], self.times[n - 1]);
        let mut best = (0usize, f64::NEG_INFINITY);
        for (i, (&t, &g)) in self.times.iter().zip(&self.sups).enumerate() {
            let v = t.powf(p) * g;
            if v > best.1 {
                best = (i, v);
            }
        }
        let (i, v0) = best;
        if v0 <= 0.0 {
            return Ok(BesovNorm {
                value: 0.0,
                t_star: t_min,
                at_boundary: false,
                s,
                alpha: self.alpha,
                t_min,
                t_max,
            });
        }
        let lo = self.times[i.saturating_sub(1)].ln();
        let hi = self.times[(i + 1).min(n - 1)].ln();
        let (lt, v) = golden_max(|lt| (p * lt).exp() * self.sup_at(lt.exp()), lo, hi);
        let (value, t_star) = if v > v0 { (v, lt.exp()) } else { (v0, self.times[i]) };
        let rel = (t_max / t_min).ln() * 1e-9;
        let at_boundary = (t_star.ln() - t_min.ln()).abs() <= rel.max(1e-12)
            || (t_max.ln() - t_star.ln()).abs() <= rel.max(1e-12)
            || i == 0
            || i == n - 1;
        Ok(BesovNorm { value, t_star, at_boundary, s, alpha: self.alpha, t_min, t_max })
    }
}

pub fn caloric_besov_norm(f: &SpectralVectorField, spec: &BesovSpec) -> Result<BesovNorm> {
    let spec = BesovSpec::new(spec.s, spec.alpha, spec.t_min, spec.t_max, spec.n_samples)?;
    CaloricProfile::new(f, spec.alpha, spec.t_min, spec.t_max, spec.n_samples)?.norm(spec.s)
}

/// Norms for several indices sharing one sampled profile and the default
/// window.
pub fn caloric_besov_norms(f: &SpectralVectorField, s_list: &[f64], alpha: f64) -> Result<Vec<BesovNorm>> {
    let (t_min, t_max) = default_window(f, alpha);
    let prof = CaloricProfile::new(f, alpha, t_min, t_max, DEFAULT_SAMPLES)?;
    s_list.iter().map(|&s| prof.norm(s)).collect()
}

/// Norm of `Σ c_j a_j cos(k_j·x)` when every `c_j ≥ 0` and all amplitudes
/// `a_j` are one unit vector, so that `‖S(t)f‖_∞ = Σ c_j e^{-λ_j t}` is
/// attained at the origin. `terms` lists `(c_j, |k_j|)`. No grid is needed,
/// so arbitrarily high wavenumbers are fine.
pub fn coherent_sum_besov(terms: &[(f64, f64)], s: f64, alpha: f64) -> Result<BesovNorm> {
    if !(s > 0.0 && alpha > 0.0) {
        return Err(Error::Domain(format!("need s > 0 and alpha > 0, got ({s}, {alpha})")));
    }
    if let Some(&(c, k)) = terms.iter().find(|(c, k)| !(*c >= 0.0) || !(*k >= 1.0)) {
        return Err(Error::Domain(format!("coherent sums need c >= 0 and |k| >= 1, got ({c}, {k})")));
    }
    let rates: Vec<f64> = terms.iter().map(|&(_, k)| k.powf(2.0 * alpha)).collect();
    let sup = |t: f64| terms.iter().zip(&rates).map(|(&(c, _), &l)| c * (-l * t).exp()).sum::<f64>();
    let lam_max = rates.iter().copied().fold(1.0, f64::max);
    let (t_min, t_max) = (1e-2 / lam_max, DEFAULT_T_MAX);
    let p = s / (2.0 * alpha);
    let n = 4 * DEFAULT_SAMPLES;
    let (l0, l1) = (t_min.ln(), t_max.ln());
    let lt = |i: usize| l0 + (l1 - l0) * i as f64 / (n - 1) as f64;
    let g = |l: f64| (p * l).exp() * sup(l.exp());
    let (i, v0) = (0..n).map(|i| (i, g(lt(i)))).fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let (l, v) = golden_max(g, lt(i.saturating_sub(1)), lt((i + 1).min(n - 1)));
    let (value, t_star) = if v > v0 { (v, l.exp()) } else { (v0, lt(i).exp()) };
    Ok(BesovNorm { value, t_star, at_boundary: i == 0 || i == n - 1, s, alpha, t_min, t_max })
}

/// Exact norm of a unit-amplitude plane wave with `|k| = κ`:
/// `p^p e^{-p} κ^{-s}` with `p = s/(2α)`, attained at `t = p κ^{-2α}`.
pub fn plane_wave_besov_exact(kappa: f64, s: f64, alpha: f64) -> f64 {
    let p = s / (2.0 * alpha);
    p.powf(p) * (-p).exp() * kappa.powf(-s)
}

pub fn plane_wave_besov_argmax(kappa: f64, s: f64, alpha: f64) -> f64 {
    s / (2.0 * alpha) * kappa.powf(-2.0 * alpha)
}
