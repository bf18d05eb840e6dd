use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Grid, Mode, SpectralVectorField};

/// Integer wave vector. Stored in 128 bits because dyadic ladders with a
/// few dozen rungs overflow 64-bit integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Wavevector(pub [i128; 3]);

impl Wavevector {
    pub const ZERO: Wavevector = Wavevector([0, 0, 0]);

    pub fn new(a: i128, b: i128, c: i128) -> Self {
        Self([a, b, c])
    }

    pub fn from_mode(m: Mode) -> Self {
        Self(m.map(i128::from))
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|&x| (x as f64) * (x as f64)).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `|k|^{2α}`, the decay rate under the fractional heat semigroup.
    pub fn rate(&self, alpha: f64) -> f64 {
        self.norm_sq().powf(alpha)
    }

    pub fn dot_f64(&self, v: [f64; 3]) -> f64 {
        self.0.iter().zip(v).map(|(&k, x)| k as f64 * x).sum()
    }

    /// Exact integer dot product, `None` on overflow.
    pub fn dot(&self, other: &[i128; 3]) -> Option<i128> {
        let mut acc: i128 = 0;
        for a in 0..3 {
            acc = acc.checked_add(self.0[a].checked_mul(other[a])?)?;
        }
        Some(acc)
    }

    pub fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(Self([
            self.0[0].checked_add(o.0[0])?,
            self.0[1].checked_add(o.0[1])?,
            self.0[2].checked_add(o.0[2])?,
        ]))
    }

    pub fn checked_sub(&self, o: &Self) -> Option<Self> {
        Some(Self([
            self.0[0].checked_sub(o.0[0])?,
            self.0[1].checked_sub(o.0[1])?,
            self.0[2].checked_sub(o.0[2])?,
        ]))
    }

    /// The lattice mode, if it fits in 64 bits.
    pub fn to_mode(&self) -> Option<Mode> {
        Some([
            i64::try_from(self.0[0]).ok()?,
            i64::try_from(self.0[1]).ok()?,
            i64::try_from(self.0[2]).ok()?,
        ])
    }

    /// `v - k (k·v)/|k|²`.
    pub fn project(&self, v: [f64; 3]) -> [f64; 3] {
        if self.is_zero() {
            return v;
        }
        let s = self.dot_f64(v) / self.norm_sq();
        [
            v[0] - s * self.0[0] as f64,
            v[1] - s * self.0[1] as f64,
            v[2] - s * self.0[2] as f64,
        ]
    }
}

impl Add for Wavevector {
    type Output = Wavevector;
    fn add(self, o: Self) -> Self {
        self.checked_add(&o).expect("wave vector overflow")
    }
}

impl Sub for Wavevector {
    type Output = Wavevector;
    fn sub(self, o: Self) -> Self {
        self.checked_sub(&o).expect("wave vector overflow")
    }
}

impl Neg for Wavevector {
    type Output = Wavevector;
    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Cosine,
    Sine,
}

/// `coefficient · amplitude · phase(k·x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWave {
    pub coefficient: f64,
    pub amplitude: [f64; 3],
    pub wavevector: Wavevector,
    pub phase: Phase,
}

impl PlaneWave {
    pub fn cosine(coefficient: f64, amplitude: [f64; 3], wavevector: Wavevector) -> Self {
        Self { coefficient, amplitude, wavevector, phase: Phase::Cosine }
    }

    pub fn sine(coefficient: f64, amplitude: [f64; 3], wavevector: Wavevector) -> Self {
        Self { coefficient, amplitude, wavevector, phase: Phase::Sine }
    }

    pub fn decay_rate(&self, alpha: f64) -> f64 {
        self.wavevector.rate(alpha)
    }

    /// Applies `e^{-t(-Δ)^α}`: the coefficient picks up `e^{-|k|^{2α} t}`.
    pub fn diffuse(&self, t: f64, alpha: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("diffusion time must be nonnegative, got {t}")));
        }
        let mut w = *self;
        if t > 0.0 && !self.wavevector.is_zero() {
            w.coefficient *= (-self.decay_rate(alpha) * t).exp();
        }
        Ok(w)
    }

    pub fn amplitude_norm(&self) -> f64 {
        self.amplitude.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `|k·a|` relative to `|k||a|` (zero for a solenoidal wave).
    pub fn divergence_defect(&self) -> f64 {
        let scale = self.wavevector.norm() * self.amplitude_norm();
        if scale == 0.0 {
            return 0.0;
        }
        self.wavevector.dot_f64(self.amplitude).abs() / scale
    }

    pub fn eval(&self, x: [f64; 3]) -> [f64; 3] {
        let phase = self.wavevector.dot_f64(x);
        let p = match self.phase {
            Phase::Cosine => phase.cos(),
            Phase::Sine => phase.sin(),
        };
        self.amplitude.map(|a| self.coefficient * a * p)
    }

    /// Adds the wave's Fourier coefficients into `f`.
    pub fn add_to(&self, f: &mut SpectralVectorField) -> Result<()> {
        let m = self.wavevector.to_mode().ok_or_else(|| Error::GridTooSmall {
            what: format!("wave vector {:?}", self.wavevector.0),
            axis: 1,
            required: i64::MAX,
            available: f.grid().cutoff(0),
        })?;
        let half = 0.5 * self.coefficient;
        let c = match self.phase {
            Phase::Cosine => Complex64::new(half, 0.0),
            Phase::Sine => Complex64::new(0.0, -half),
        };
        if m == [0, 0, 0] {
            // cos(0) = 1, sin(0) = 0
            if self.phase == Phase::Cosine {
                let v = self.amplitude.map(|a| Complex64::new(self.coefficient * a, 0.0));
                f.add_mode(m, v)?;
            }
            return Ok(());
        }
        f.add_mode(m, self.amplitude.map(|a| c * a))
    }
}

/// Finite sum of plane waves.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WaveSum {
    pub waves: Vec<PlaneWave>,
}

impl WaveSum {
    pub fn new(waves: Vec<PlaneWave>) -> Self {
        Self { waves }
    }

    pub fn len(&self) -> usize {
        self.waves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waves.is_empty()
    }

    pub fn push(&mut self, w: PlaneWave) {
        self.waves.push(w);
    }

    pub fn extend(&mut self, other: WaveSum) {
        self.waves.extend(other.waves);
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(
            self.waves
                .iter()
                .map(|w| PlaneWave { coefficient: w.coefficient * s, ..*w })
                .collect(),
        )
    }

    pub fn diffuse(&self, t: f64, alpha: f64) -> Result<Self> {
        Ok(Self::new(self.waves.iter().map(|w| w.diffuse(t, alpha)).collect::<Result<_>>()?))
    }

    pub fn eval(&self, x: [f64; 3]) -> [f64; 3] {
        let mut acc = [0.0; 3];
        for w in &self.waves {
            let v = w.eval(x);
            for a in 0..3 {
                acc[a] += v[a];
            }
        }
        acc
    }

    /// Per-axis largest |k_a| over all waves.
    pub fn band(&self) -> [i128; 3] {
        let mut b = [0i128; 3];
        for w in &self.waves {
            for a in 0..3 {
                b[a] = b[a].max(w.wavevector.0[a].abs());
            }
        }
        b
    }

    /// Exact spectral representation on `grid`; fails if a wave does not fit.
    pub fn to_field(&self, grid: Grid) -> Result<SpectralVectorField> {
        let mut f = SpectralVectorField::zeros(grid);
        for w in &self.waves {
            w.add_to(&mut f)?;
        }
        Ok(f)
    }
}

/// `∫_0^t e^{-aτ} e^{-b(t-τ)} dτ`, with the resonant limit `t e^{-at}` when
/// `|a - b| < 1e-9 (a + b + 1)`.
pub fn duhamel_weight(a: f64, b: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if (a - b).abs() < 1e-9 * (a + b + 1.0) {
        return t * (-a * t).exp();
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let d = hi - lo;
    (-lo * t).exp() * (-(-d * t).exp_m1()) / d
}

/// Closed form of `B_α(e^{-τ(-Δ)^α} w1, e^{-τ(-Δ)^α} w2)(t)` for two cosine
/// waves: transport of `w2`'s profile by `w1` yields sine waves at
/// `k2 ± k1` along `P v2` with coefficient `-c1 c2 (k2·v1)/2` times the
/// Duhamel weight.
pub fn interact_diffused(w1: &PlaneWave, w2: &PlaneWave, alpha: f64, t: f64) -> Result<WaveSum> {
    if w1.phase != Phase::Cosine || w2.phase != Phase::Cosine {
        return Err(Error::Unsupported("interaction of sine-phase waves".into()));
    }
    if w1.divergence_defect() > 1e-12 {
        return Err(Error::Precondition("transporting wave is not divergence-free".into()));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("interaction time must be nonnegative, got {t}")));
    }
    let (k1, k2) = (w1.wavevector, w2.wavevector);
    let factor = -0.5 * w1.coefficient * w2.coefficient * k2.dot_f64(w1.amplitude);
    let mut out = WaveSum::default();
    if factor == 0.0 || t == 0.0 {
        return Ok(out);
    }
    let a = k1.rate(alpha) + k2.rate(alpha);
    for m in [
        k2.checked_sub(&k1).ok_or_else(|| Error::Domain("wave vector overflow".into()))?,
        k2.checked_add(&k1).ok_or_else(|| Error::Domain("wave vector overflow".into()))?,
    ] {
        if m.is_zero() {
            continue;
        }
        let amp = m.project(w2.amplitude);
        if amp.iter().all(|&x| x == 0.0) {
            continue;
        }
        let c = factor * duhamel_weight(a, m.rate(alpha), t);
        out.push(PlaneWave::sine(c, amp, m));
    }
    Ok(out)
}
