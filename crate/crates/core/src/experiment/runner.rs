use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::report::{fit_exponent, IndexReport, ResidualSummary, RunReport, SeriesRow, SweepReport};
use crate::besov::{coherent_sum_besov, plane_wave_besov_argmax, plane_wave_besov_exact, BesovNorm, DEFAULT_T_MAX};
use crate::construction::{build_initial_data, derive_params, initial_besov, initial_waves, minimal_slab_grid, required_cutoffs, InflationParams};
use crate::error::{Error, Result};
use crate::plane_wave::{b1_closed_form, WaveSum};
use crate::solver::{simulate, Integration, SimulationConfig};
use crate::spectral::{grid_for_band, Grid};

pub fn run_id(cfg: &ExperimentConfig) -> String {
    let k = cfg.k_base.map_or(String::new(), |k| format!("_K{k}"));
    let tail = if cfg.analytic_only { "_analytic" } else { "" };
    format!("r{}_a{}-{}_eps{}{k}{tail}", cfg.r, cfg.alpha1, cfg.alpha2, cfg.epsilon)
}

/// Grid from the config, or the smallest one that holds the construction.
pub fn run_grid(cfg: &ExperimentConfig, p: &InflationParams) -> Result<Grid> {
    match (cfg.slab, cfg.grid.as_slice()) {
        (true, []) => minimal_slab_grid(p),
        (false, []) => {
            let need = required_cutoffs(p);
            let k = i64::try_from(need[0]).map_err(|_| Error::Grid("ladder too large for a grid".into()))?;
            grid_for_band([k, 1, need[2] as i64], false)
        }
        (true, &[n1, n3]) => Grid::slab(n1, n3),
        (false, &[n1, n2, n3]) => Grid::full(n1, n2, n3),
        _ => Err(Error::Config(format!("grid {:?} does not match the slab setting", cfg.grid))),
    }
}

/// `|c₁₀(t)|`, the amplitude of the low-mode piece of `b₁`.
fn b10_amplitude(p: &InflationParams, t: f64) -> Result<f64> {
    let parts = b1_closed_form(p, t)?;
    Ok(parts.b10.waves.iter().map(|w| w.coefficient.abs() * w.amplitude_norm()).sum())
}

/// `(c, |k|)` for a ladder, whose waves are in phase at the origin.
fn coherent_terms(w: &WaveSum) -> Vec<(f64, f64)> {
    w.waves.iter().map(|w| (w.coefficient * w.amplitude_norm(), w.wavevector.norm())).collect()
}

fn smallness_constant(p: &InflationParams, u0: f64, b0: f64) -> f64 {
    let r = p.r as f64;
    (u0 + b0) / (r.powf(-p.beta1) + r.powf(-p.beta2))
}

fn exact_wave_norm(amplitude: f64, s: f64, alpha: f64) -> BesovNorm {
    BesovNorm {
        value: amplitude * plane_wave_besov_exact(1.0, s, alpha),
        t_star: plane_wave_besov_argmax(1.0, s, alpha),
        at_boundary: false,
        s,
        alpha,
        t_min: 0.0,
        t_max: DEFAULT_T_MAX,
    }
}

/// Builds the data for `cfg.r`, evolves it to `T` (or evaluates the closed
/// form in analytic mode) and collects the report.
pub fn run_single(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut p = derive_params(cfg.alpha1, cfg.alpha2, cfg.epsilon, cfg.r, cfg.theta1)?;
    if let Some(k) = cfg.k_base {
        p = p.with_k_base(k as i128)?;
    }
    if cfg.analytic_only {
        run_analytic(cfg, p)
    } else {
        run_solver(cfg, p)
    }
}

fn run_analytic(cfg: &ExperimentConfig, p: InflationParams) -> Result<RunReport> {
    let (a1, a2) = (p.alpha1, p.alpha2);
    let (uw, bw) = initial_waves(&p);
    let (ut, bt) = (coherent_terms(&uw), coherent_terms(&bw));
    let u0_besov = coherent_sum_besov(&ut, p.theta1, a1)?;
    let b0_besov = coherent_sum_besov(&bt, p.theta2, a2)?;
    let times: Vec<f64> = (0..=cfg.n_samples).map(|i| p.t_final * i as f64 / cfg.n_samples as f64).collect();
    let series = times
        .par_iter()
        .map(|&t| {
            let c10 = b10_amplitude(&p, t)?;
            let (mut sup_u, mut e, mut d) = (0.0, 0.25 * c10 * c10, 0.5 * c10 * c10);
            for &(c, k) in &ut {
                let l = k.powf(2.0 * a1);
                let ct = c * (-l * t).exp();
                sup_u += ct;
                e += 0.25 * ct * ct;
                d += 0.5 * l * ct * ct;
            }
            Ok(SeriesRow {
                t,
                sup_u,
                sup_b: c10,
                energy: e,
                dissipation: d,
                besov_b: cfg.s_list.iter().map(|&s| c10 * plane_wave_besov_exact(1.0, s, a2)).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let c10 = series.last().map_or(0.0, |row| row.sup_b);
    let scale = (p.r as f64).powf(p.predicted_exponent());
    let indices = cfg
        .s_list
        .iter()
        .map(|&s| {
            let b_initial = coherent_sum_besov(&bt, s, a2)?;
            let b_final = exact_wave_norm(c10, s, a2);
            Ok(IndexReport {
                s,
                alpha: a2,
                inflation_factor: b_final.value / b_initial.value,
                b10_final: b_final.value,
                b10_scaled: b_final.value / scale,
                b_initial,
                b_final,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RunReport {
        run_id: run_id(cfg),
        analytic_only: true,
        feasibility: p.feasibility(),
        grid: None,
        smallness_constant: smallness_constant(&p, u0_besov.value, b0_besov.value),
        u0_besov,
        b0_besov,
        predicted_exponent: p.predicted_exponent(),
        indices,
        residuals: None,
        stats: None,
        max_divergence: None,
        max_energy_audit: None,
        series,
        params: p,
    })
}

fn run_solver(cfg: &ExperimentConfig, p: InflationParams) -> Result<RunReport> {
    let grid = run_grid(cfg, &p)?;
    let (u0, b0) = build_initial_data(&p, grid)?;
    let (u0_besov, b0_besov) = initial_besov(&p, &u0, &b0)?;
    let sim = SimulationConfig {
        integration: Integration {
            dt: cfg.dt_policy(),
            blowup_cap: cfg.blowup_cap,
            ..Integration::new(p.alpha1, p.alpha2)
        },
        t_final: p.t_final,
        n_samples: cfg.n_samples,
        s_list: cfg.s_list.clone(),
    };
    let traj = simulate(&u0, &b0, &sim, Some(&p))?;
    let (first, last) = (traj.first(), traj.last());
    let c10 = b10_amplitude(&p, p.t_final)?;
    let scale = (p.r as f64).powf(p.predicted_exponent());
    let indices = cfg
        .s_list
        .iter()
        .enumerate()
        .map(|(j, &s)| {
            let b10_final = c10 * plane_wave_besov_exact(1.0, s, p.alpha2);
            IndexReport {
                s,
                alpha: p.alpha2,
                b_initial: first.besov_b[j],
                b_final: last.besov_b[j],
                inflation_factor: last.besov_b[j].value / first.besov_b[j].value,
                b10_final,
                b10_scaled: b10_final / scale,
            }
        })
        .collect();
    let residuals = traj.residual_ratio_max().map(|(y, z)| ResidualSummary {
        y_ratio_max: y,
        z_ratio_max: z,
        z_sup_final: last.residual.map_or(f64::NAN, |r| r.z_sup),
        b10_sup_final: last.residual.map_or(f64::NAN, |r| r.b10_sup),
    });
    let series = traj
        .samples
        .iter()
        .map(|s| SeriesRow {
            t: s.t,
            sup_u: s.sup_u,
            sup_b: s.sup_b,
            energy: s.energy,
            dissipation: s.dissipation,
            besov_b: s.besov_b.iter().map(|n| n.value).collect(),
        })
        .collect();
    Ok(RunReport {
        run_id: run_id(cfg),
        analytic_only: false,
        feasibility: p.feasibility(),
        grid: Some(grid.dims()),
        smallness_constant: smallness_constant(&p, u0_besov.value, b0_besov.value),
        u0_besov,
        b0_besov,
        predicted_exponent: p.predicted_exponent(),
        indices,
        residuals,
        stats: Some(traj.stats),
        max_divergence: Some(traj.max_divergence()),
        max_energy_audit: Some(traj.max_energy_audit()),
        series,
        params: p,
    })
}

/// [`run_single`] for every `r` in `r_list` (in parallel on `workers`
/// threads), then a log-log fit per `s` of `‖b(T)‖_{Ḃ^{-s}}` against `r`
/// (`‖b₁₀(T)‖` in analytic mode).
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    let cfg = ExperimentConfig { mode: super::config::Mode::Sweep, ..cfg.clone() };
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let runs: Vec<RunReport> =
        pool.install(|| cfg.r_list.par_iter().map(|&r| run_single(&cfg.for_r(r))).collect::<Result<_>>())?;
    let rs: Vec<f64> = cfg.r_list.iter().map(|&r| r as f64).collect();
    let predicted = runs[0].predicted_exponent;
    let fits = cfg
        .s_list
        .iter()
        .enumerate()
        .map(|(j, &s)| {
            let y: Vec<f64> = runs.iter().map(|run| run.indices[j].b_final.value).collect();
            fit_exponent(&rs, &y, s, predicted)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        r_list: cfg.r_list.clone(),
        run_ids: runs.iter().map(|r| r.run_id.clone()).collect(),
        predicted_exponent: predicted,
        fits,
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_single_wave_run() {
        let cfg = ExperimentConfig { r: 1, analytic_only: true, n_samples: 4, ..Default::default() };
        let rep = run_single(&cfg).unwrap();
        assert_eq!(rep.series.len(), 5);
        assert_eq!(rep.series[0].sup_b, 0.0);
        assert!(rep.indices[0].b_final.value > 0.0);
        assert!(rep.grid.is_none());
        assert_eq!(rep.run_id, "r1_a1-1_eps0.1_analytic");
    }

    #[test]
    fn analytic_and_solver_agree_on_initial_norms() {
        let base = ExperimentConfig { r: 2, n_samples: 2, ..Default::default() };
        let a = run_single(&ExperimentConfig { analytic_only: true, ..base.clone() }).unwrap();
        let p = derive_params(1.0, 1.0, 0.1, 2, None).unwrap();
        let (u0, b0) = build_initial_data(&p, minimal_slab_grid(&p).unwrap()).unwrap();
        let (nu, nb) = initial_besov(&p, &u0, &b0).unwrap();
        assert!((a.u0_besov.value / nu.value - 1.0).abs() < 1e-6);
        assert!((a.b0_besov.value / nb.value - 1.0).abs() < 1e-6);
    }
}
