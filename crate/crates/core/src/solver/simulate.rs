use serde::{Deserialize, Serialize};

use super::etd::{DtPolicy, Dynamics, SolverState, Stepper};
use crate::besov::{caloric_besov_norms, BesovNorm};
use crate::construction::InflationParams;
use crate::error::{Error, Result};
use crate::plane_wave::b1_closed_form;
use crate::spectral::{
    check_divergence_free, divergence_max, fractional_semigroup, sup_norm_refined,
    SpectralVectorField,
};

/// Oversampling used for sup norms in diagnostics.
const DIAG_OVERSAMPLE: usize = 2;

/// Time-stepping controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Integration {
    pub alpha1: f64,
    pub alpha2: f64,
    pub dt: DtPolicy,
    /// Early termination when `‖u‖∞ + ‖b‖∞` exceeds this.
    pub blowup_cap: f64,
    pub nonlinear: bool,
}

impl Integration {
    pub fn new(alpha1: f64, alpha2: f64) -> Self {
        Self { alpha1, alpha2, dt: DtPolicy::default(), blowup_cap: 1e8, nonlinear: true }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub steps: usize,
    pub dt_min: f64,
    pub dt_max: f64,
}

/// Integrates from `(u0, b0)` at `t = 0`, calling `observe(state, ∫D dt)`
/// at each of `sample_times` (increasing; a leading 0 observes the data).
pub fn integrate<F>(
    u0: &SpectralVectorField,
    b0: &SpectralVectorField,
    integ: &Integration,
    sample_times: &[f64],
    mut observe: F,
) -> Result<RunStats>
where
    F: FnMut(&SolverState, f64) -> Result<()>,
{
    if u0.grid() != b0.grid() {
        return Err(Error::Grid("velocity and magnetic field live on different grids".into()));
    }
    if sample_times.windows(2).any(|w| !(w[1] > w[0])) || sample_times.iter().any(|&t| !(t >= 0.0)) {
        return Err(Error::Config("sample times must be nonnegative and strictly increasing".into()));
    }
    check_divergence_free(u0, "initial velocity")?;
    check_divergence_free(b0, "initial magnetic field")?;
    let mut dynamics = Dynamics::new(*u0.grid(), integ.alpha1, integ.alpha2)?;
    if !integ.nonlinear {
        dynamics = dynamics.linear_only();
    }
    let mut stepper = Stepper::new(dynamics);
    let dissipation = |s: &SolverState| s.u.dissipation(integ.alpha1) + s.b.dissipation(integ.alpha2);

    let mut state = SolverState { t: 0.0, u: u0.clone(), b: b0.clone() };
    let mut stats = RunStats { steps: 0, dt_min: f64::INFINITY, dt_max: 0.0 };
    let mut d_prev = dissipation(&state);
    let mut audit = 0.0;
    let t_end = sample_times.last().copied().unwrap_or(0.0);
    let mut dt_nominal: Option<f64> = None;
    let mut since_check = 0usize;

    for &target in sample_times {
        while state.t < target {
            let n0 = stepper.dynamics().tendency(&state.u, &state.b);
            let total = n0.sup_u + n0.sup_b;
            if !(total <= integ.blowup_cap) {
                return Err(Error::BlowUp { t: state.t, norm: total, cap: integ.blowup_cap });
            }
            let remaining = target - state.t;
            let dt = match integ.dt {
                DtPolicy::FixedSteps(n) => {
                    if n == 0 {
                        return Err(Error::Config("fixed step count must be positive".into()));
                    }
                    t_end / n as f64
                }
                DtPolicy::Cfl { courant, recheck_every } => {
                    if dt_nominal.is_none() || since_check >= recheck_every.max(1) {
                        let k = state.u.max_active_wavenumber(1e-10).max(state.b.max_active_wavenumber(1e-10));
                        dt_nominal = Some(if k * total > 0.0 { courant / (k * total) } else { f64::INFINITY });
                        since_check = 0;
                    }
                    since_check += 1;
                    dt_nominal.unwrap()
                }
            };
            let lands = dt >= remaining * (1.0 - 1e-12);
            let dt = if lands { remaining } else { dt };
            let mut next = stepper.advance(&state, &n0, dt)?;
            if lands {
                next.t = target;
            }
            let d_next = dissipation(&next);
            audit += 0.5 * dt * (d_prev + d_next);
            d_prev = d_next;
            stats.steps += 1;
            stats.dt_min = stats.dt_min.min(dt);
            stats.dt_max = stats.dt_max.max(dt);
            state = next;
        }
        observe(&state, audit)?;
    }
    if stats.steps == 0 {
        stats.dt_min = 0.0;
    }
    Ok(stats)
}

/// Evaluates `y = u - S_{α₁}(t)u₀` and `z = b - S_{α₂}(t)b₀ + b₁(t)` and
/// compares them with the three-term bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub t: f64,
    pub y_sup: f64,
    pub z_sup: f64,
    /// `r^{1-β₁-2β₂} t^{1-1/(2α₁)-θ₂/(2α₁)} + r^{2(1-β₁-β₂)} t^{1-1/(2α₁)}
    /// + r^{1-2β₁-β₂} t^{1-1/(2α₂)-θ₁/(2α₂)}`.
    pub bound: f64,
    pub y_ratio: Option<f64>,
    pub z_ratio: Option<f64>,
    /// `‖b₁₀(t)‖∞` from the closed form.
    pub b10_sup: f64,
}

pub fn residual_bound(p: &InflationParams, t: f64) -> f64 {
    let r = p.r as f64;
    let (a1, a2) = (p.alpha1, p.alpha2);
    r.powf(1.0 - p.beta1 - 2.0 * p.beta2) * t.powf(1.0 - 1.0 / (2.0 * a1) - p.theta2 / (2.0 * a1))
        + r.powf(2.0 * (1.0 - p.beta1 - p.beta2)) * t.powf(1.0 - 1.0 / (2.0 * a1))
        + r.powf(1.0 - 2.0 * p.beta1 - p.beta2) * t.powf(1.0 - 1.0 / (2.0 * a2) - p.theta1 / (2.0 * a2))
}

pub fn first_iteration_residuals(
    state: &SolverState,
    u0: &SpectralVectorField,
    b0: &SpectralVectorField,
    p: &InflationParams,
) -> Result<Residual> {
    let t = state.t;
    let grid = *state.u.grid();
    let y = &state.u - &fractional_semigroup(u0, t, p.alpha1)?;
    let b1 = b1_closed_form(p, t)?;
    let z = &(&state.b - &fractional_semigroup(b0, t, p.alpha2)?) + &b1.total().to_field(grid)?;
    let y_sup = sup_norm_refined(&y, DIAG_OVERSAMPLE);
    let z_sup = sup_norm_refined(&z, DIAG_OVERSAMPLE);
    let bound = if t > 0.0 { residual_bound(p, t) } else { 0.0 };
    let ratio = |x: f64| (bound > 0.0).then(|| x / bound);
    Ok(Residual {
        t,
        y_sup,
        z_sup,
        bound,
        y_ratio: ratio(y_sup),
        z_ratio: ratio(z_sup),
        b10_sup: b1
            .b10
            .waves
            .iter()
            .map(|w| w.coefficient.abs() * w.amplitude.iter().map(|a| a * a).sum::<f64>().sqrt())
            .sum(),
    })
}

/// What to record at each sample time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub integration: Integration,
    pub t_final: f64,
    /// Samples at `t_final · i / n_samples`, `i = 0..=n_samples`.
    pub n_samples: usize,
    /// Besov indices tracked for `b` (caloric power α₂).
    pub s_list: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub sup_u: f64,
    pub sup_b: f64,
    pub energy: f64,
    pub dissipation: f64,
    /// `E(t) - E(0) + ∫_0^t D` (trapezoidal in the step sequence).
    pub energy_audit: f64,
    pub div_u: f64,
    pub div_b: f64,
    pub off_slab: f64,
    pub besov_b: Vec<BesovNorm>,
    pub residual: Option<Residual>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub stats: RunStats,
    pub s_list: Vec<f64>,
}

impl Trajectory {
    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has samples")
    }

    pub fn max_divergence(&self) -> f64 {
        self.samples.iter().map(|s| s.div_u.max(s.div_b)).fold(0.0, f64::max)
    }

    pub fn max_off_slab(&self) -> f64 {
        self.samples.iter().map(|s| s.off_slab).fold(0.0, f64::max)
    }

    pub fn max_energy_audit(&self) -> f64 {
        self.samples.iter().map(|s| s.energy_audit.abs()).fold(0.0, f64::max)
    }

    /// `(max y ratio, max z ratio)` over samples with `t > 0`.
    pub fn residual_ratio_max(&self) -> Option<(f64, f64)> {
        let rs: Vec<&Residual> = self.samples.iter().filter_map(|s| s.residual.as_ref()).collect();
        if rs.is_empty() {
            return None;
        }
        let y = rs.iter().filter_map(|r| r.y_ratio).fold(0.0, f64::max);
        let z = rs.iter().filter_map(|r| r.z_ratio).fold(0.0, f64::max);
        Some((y, z))
    }
}

/// Runs to `t_final`, recording diagnostics; with `params`, also the
/// first-iteration residuals.
pub fn simulate(
    u0: &SpectralVectorField,
    b0: &SpectralVectorField,
    cfg: &SimulationConfig,
    params: Option<&InflationParams>,
) -> Result<Trajectory> {
    if cfg.n_samples == 0 || !(cfg.t_final > 0.0) {
        return Err(Error::Config("need a positive final time and at least one sample".into()));
    }
    let times: Vec<f64> = (0..=cfg.n_samples)
        .map(|i| cfg.t_final * i as f64 / cfg.n_samples as f64)
        .collect();
    let integ = cfg.integration;
    let e0 = u0.energy() + b0.energy();
    let mut samples = Vec::with_capacity(times.len());
    let stats = integrate(u0, b0, &integ, &times, |s, audit| {
        let besov_b = if cfg.s_list.is_empty() || s.b.is_zero() {
            Vec::new()
        } else {
            caloric_besov_norms(&s.b, &cfg.s_list, integ.alpha2)?
        };
        let residual = match params {
            Some(p) => Some(first_iteration_residuals(s, u0, b0, p)?),
            None => None,
        };
        let energy = s.u.energy() + s.b.energy();
        samples.push(Sample {
            t: s.t,
            sup_u: sup_norm_refined(&s.u, DIAG_OVERSAMPLE),
            sup_b: sup_norm_refined(&s.b, DIAG_OVERSAMPLE),
            energy,
            dissipation: s.u.dissipation(integ.alpha1) + s.b.dissipation(integ.alpha2),
            energy_audit: energy - e0 + audit,
            div_u: divergence_max(&s.u),
            div_b: divergence_max(&s.b),
            off_slab: s.u.off_slab_max().max(s.b.off_slab_max()),
            besov_b,
            residual,
        });
        Ok(())
    })?;
    Ok(Trajectory { samples, stats, s_list: cfg.s_list.clone() })
}

/// Final state only.
pub fn evolve(
    u0: &SpectralVectorField,
    b0: &SpectralVectorField,
    integ: &Integration,
    t_final: f64,
) -> Result<(SolverState, RunStats)> {
    let mut out = None;
    let stats = integrate(u0, b0, integ, &[t_final], |s, _| {
        out = Some(s.clone());
        Ok(())
    })?;
    Ok((out.expect("final sample observed"), stats))
}
