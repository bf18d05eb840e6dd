use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::besov::{caloric_besov_norms, plane_wave_besov_exact};
use crate::construction::{derive_params, initial_waves, lemma_k_report, InflationParams};
use crate::error::Result;
use crate::plane_wave::{
    b1_closed_form, bilinear_numeric, first_iterate_grid, first_iterates_numeric, interact_diffused, semigroup_orbit, PlaneWave, WaveSum, Wavevector,
};
use crate::solver::{scaling_symmetry_check, simulate, DtPolicy, Integration, SimulationConfig};
use crate::spectral::{fractional_semigroup, sup_norm_refined, Grid, SpectralVectorField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Measured quantity compared against `tolerance`.
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failing(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn below(name: &str, value: f64, tolerance: f64, detail: String) -> CheckResult {
    CheckResult { name: name.into(), pass: value < tolerance, value, tolerance, detail }
}

fn failed(name: &str, err: crate::Error) -> CheckResult {
    CheckResult { name: name.into(), pass: false, value: f64::NAN, tolerance: f64::NAN, detail: err.to_string() }
}

fn guard(name: &str, f: impl FnOnce() -> Result<CheckResult>) -> CheckResult {
    f().unwrap_or_else(|e| failed(name, e))
}

fn random_wave(rng: &mut ChaCha8Rng, kmax: i128) -> PlaneWave {
    loop {
        let k = Wavevector::new(
            rng.random_range(-kmax..=kmax),
            rng.random_range(-kmax..=kmax),
            rng.random_range(-kmax..=kmax),
        );
        if k.is_zero() {
            continue;
        }
        let a = k.project([rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]);
        let n = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n < 0.1 {
            continue;
        }
        return PlaneWave::cosine(rng.random_range(0.5..2.0), a.map(|x| x / n), k);
    }
}

/// Semigroup on single cosine waves against `e^{-|k|^{2α}t}`.
fn semigroup_check(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let g = Grid::full(16, 16, 16)?;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let w = random_wave(rng, 6);
        let (alpha, t) = (rng.random_range(1.0..2.0), rng.random_range(0.0..1.0));
        let f = WaveSum::new(vec![w]).to_field(g)?;
        let got = fractional_semigroup(&f, t, alpha)?;
        let want = f.scaled((-w.wavevector.rate(alpha) * t).exp());
        worst = worst.max((&got - &want).max_abs_coeff() / f.max_abs_coeff());
    }
    Ok(below("semigroup_plane_wave", worst, 1e-13, "50 random (k, alpha, t)".into()))
}

/// Quadrature bilinear term against the closed form on random pairs.
fn bilinear_check(rng: &mut ChaCha8Rng, alpha: f64, n_quad: usize) -> Result<CheckResult> {
    let g = Grid::full(16, 16, 16)?;
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 20 {
        let (w1, w2) = (random_wave(rng, 3), random_wave(rng, 3));
        let t = rng.random_range(0.05..0.5);
        let exact = interact_diffused(&w1, &w2, alpha, t)?;
        if exact.is_empty() {
            continue;
        }
        let exact = exact.to_field(g)?;
        let scale = sup_norm_refined(&exact, 2);
        if scale < 1e-8 {
            continue;
        }
        let (f1, f2) = (WaveSum::new(vec![w1]).to_field(g)?, WaveSum::new(vec![w2]).to_field(g)?);
        let num = bilinear_numeric(semigroup_orbit(&f1, alpha), semigroup_orbit(&f2, alpha), t, alpha, n_quad)?;
        worst = worst.max(sup_norm_refined(&(&num - &exact), 2) / scale);
        done += 1;
    }
    Ok(below("bilinear_closed_form", worst, 1e-8, format!("20 random pairs, {n_quad}-point quadrature")))
}

/// `u₁ ≡ 0` by quadrature at `T/4, T/2, T`.
fn u1_check(p: &InflationParams, n_quad: usize) -> Result<CheckResult> {
    let g = first_iterate_grid(p)?;
    let (u0, b0) = initial_waves(p);
    let (u0, b0) = (u0.to_field(g)?, b0.to_field(g)?);
    let scale = sup_norm_refined(&u0, 2) + sup_norm_refined(&b0, 2);
    let mut worst: f64 = 0.0;
    for frac in [0.25, 0.5, 1.0] {
        let (u1, _) = first_iterates_numeric(p, frac * p.t_final, n_quad)?;
        worst = worst.max(sup_norm_refined(&u1, 2) / scale);
    }
    Ok(below("u1_vanishes", worst, 1e-10, format!("r = {}, relative to the data", p.r)))
}

/// Closed-form `b₁₀ + b₁₁ + b₁₂` against both quadrature terms at `T/2`.
fn b1_check(p: &InflationParams, n_quad: usize) -> Result<CheckResult> {
    let t = 0.5 * p.t_final;
    let g = first_iterate_grid(p)?;
    let (_, num) = first_iterates_numeric(p, t, n_quad)?;
    let exact = b1_closed_form(p, t)?.total().to_field(g)?;
    let err = sup_norm_refined(&(&num - &exact), 2) / sup_norm_refined(&exact, 2);
    Ok(below("b1_decomposition", err, 1e-7, format!("r = {}, t = T/2", p.r)))
}

fn ladder_check(p: &InflationParams) -> CheckResult {
    let rep = lemma_k_report(p, p.theta1, p.theta1, p.alpha1, p.t_final);
    CheckResult {
        name: "ladder_identities".into(),
        pass: rep.orthogonality_exact && rep.partial_sums_within_bound,
        value: rep.partial_sum_ratios.iter().copied().fold(0.0, f64::max),
        tolerance: rep.partial_sum_bound,
        detail: format!("orthogonality exact: {}", rep.orthogonality_exact),
    }
}

fn besov_check() -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    // (15, 0, 9) has |k| = √306 ≈ 17.49
    for k in [[1i64, 0, 0], [2, 0, 0], [4, 0, 0], [8, 0, 0], [15, 0, 9]] {
        let kappa = ((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64).sqrt();
        let g = crate::spectral::grid_for_band([k[0], 0, k[2]], true)?;
        let w = PlaneWave::cosine(1.0, Wavevector::new(k[0] as i128, 0, k[2] as i128).project([0.0, 1.0, 0.0]), Wavevector::new(k[0] as i128, 0, k[2] as i128));
        let f = WaveSum::new(vec![w]).to_field(g)?;
        for alpha in [1.0, 1.5] {
            let norms = caloric_besov_norms(&f, &[0.5, 1.0, 2.0], alpha)?;
            for n in norms {
                let exact = plane_wave_besov_exact(kappa, n.s, alpha);
                worst = worst.max((n.value / exact - 1.0).abs());
            }
        }
    }
    Ok(below("besov_plane_wave", worst, 1e-2, "kappa in {1, 2, 4, 8, 17.49}, s in {0.5, 1, 2}, alpha in {1, 1.5}".into()))
}

fn interacting_pair(g: Grid) -> Result<(SpectralVectorField, SpectralVectorField)> {
    let u = WaveSum::new(vec![
        PlaneWave::cosine(0.6, [0.0, 1.0, 0.0], Wavevector::new(1, 0, 1)),
        PlaneWave::sine(0.4, [1.0, 0.0, 0.0], Wavevector::new(0, 1, 1)),
    ]);
    let b = WaveSum::new(vec![
        PlaneWave::cosine(0.5, [0.0, 0.0, 1.0], Wavevector::new(1, 1, 0)),
        PlaneWave::sine(0.3, [0.0, 1.0, 1.0], Wavevector::new(1, 0, 0)),
    ]);
    Ok((u.to_field(g)?, b.to_field(g)?))
}

/// Energy audit shrinks at second order under step halving.
fn energy_check(alpha1: f64, alpha2: f64) -> Result<CheckResult> {
    let g = Grid::full(16, 16, 16)?;
    let (u0, b0) = interacting_pair(g)?;
    let audit = |n: usize| -> Result<f64> {
        let cfg = SimulationConfig {
            integration: Integration { dt: DtPolicy::FixedSteps(n), ..Integration::new(alpha1, alpha2) },
            t_final: 0.5,
            n_samples: 1,
            s_list: Vec::new(),
        };
        Ok(simulate(&u0, &b0, &cfg, None)?.max_energy_audit())
    };
    let (a, b) = (audit(20)?, audit(40)?);
    let order = (a / b).log2();
    Ok(CheckResult {
        name: "energy_audit".into(),
        pass: order > 1.7,
        value: order,
        tolerance: 1.7,
        detail: format!("audit {a:.3e} at 20 steps, {b:.3e} at 40"),
    })
}

/// Slab data on a full grid keeps `m₂ = 0` and stays solenoidal.
fn slab_check(alpha1: f64, alpha2: f64) -> Result<CheckResult> {
    let g = Grid::full(16, 8, 16)?;
    let u0 = WaveSum::new(vec![PlaneWave::cosine(1.0, [0.0, 1.0, 0.0], Wavevector::new(1, 0, 1))]).to_field(g)?;
    let b0 = WaveSum::new(vec![PlaneWave::cosine(1.0, [0.0, 0.0, 1.0], Wavevector::new(2, 0, 0))]).to_field(g)?;
    let cfg = SimulationConfig { integration: Integration::new(alpha1, alpha2), t_final: 0.3, n_samples: 3, s_list: Vec::new() };
    let tr = simulate(&u0, &b0, &cfg, None)?;
    let worst = tr.max_off_slab().max(tr.max_divergence() * 1e-2);
    Ok(below("slab_invariance", worst, 1e-12, format!("max divergence {:.3e}", tr.max_divergence())))
}

fn scaling_check() -> Result<CheckResult> {
    let g = Grid::slab(8, 8)?;
    let (u0, b0) = (
        WaveSum::new(vec![PlaneWave::cosine(0.3, [0.0, 1.0, 0.0], Wavevector::new(1, 0, 1))]).to_field(g)?,
        WaveSum::new(vec![PlaneWave::cosine(0.2, [0.0, 0.0, 1.0], Wavevector::new(1, 0, 0))]).to_field(g)?,
    );
    let d = scaling_symmetry_check(&u0, &b0, 1.0, 2, 0.2, 40)?;
    Ok(below("scaling_symmetry", d, 1e-6, "alpha = 1, lambda = 2".into()))
}

/// Runs every named check; construction checks use the configured
/// parameters with `r = min(cfg.r, 2)`.
pub fn run_verify(cfg: &ExperimentConfig) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let params = derive_params(cfg.alpha1, cfg.alpha2, cfg.epsilon, cfg.r.clamp(1, 2), cfg.theta1);
    let mut checks = vec![
        guard("semigroup_plane_wave", || semigroup_check(&mut rng)),
        guard("bilinear_closed_form", || bilinear_check(&mut rng, cfg.alpha2, cfg.n_quad)),
    ];
    match &params {
        Ok(p) => {
            checks.push(CheckResult {
                name: "feasibility".into(),
                pass: p.feasibility().overall,
                value: 0.0,
                tolerance: 0.0,
                detail: format!("theta1 = {}, gamma = {}, zeta = {}", p.theta1, p.gamma, p.zeta_exp),
            });
            checks.push(guard("u1_vanishes", || u1_check(p, cfg.n_quad)));
            checks.push(guard("b1_decomposition", || b1_check(p, cfg.n_quad)));
            checks.push(ladder_check(p));
        }
        Err(e) => {
            for name in ["feasibility", "u1_vanishes", "b1_decomposition", "ladder_identities"] {
                checks.push(failed(name, e.clone()));
            }
        }
    }
    checks.push(guard("besov_plane_wave", besov_check));
    checks.push(guard("energy_audit", || energy_check(cfg.alpha1, cfg.alpha2)));
    checks.push(guard("slab_invariance", || slab_check(cfg.alpha1, cfg.alpha2)));
    checks.push(guard("scaling_symmetry", scaling_check));
    let passed = checks.iter().all(|c| c.pass);
    VerifyReport { checks, passed }
}
