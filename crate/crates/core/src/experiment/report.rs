use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::config::ExperimentConfig;
use crate::besov::BesovNorm;
use crate::construction::{FeasibilityReport, InflationParams};
use crate::error::{Error, Result};
use crate::solver::RunStats;

/// One row of `series.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub t: f64,
    pub sup_u: f64,
    pub sup_b: f64,
    pub energy: f64,
    pub dissipation: f64,
    /// `‖b(t)‖_{Ḃ^{-s}}` in `s_list` order.
    pub besov_b: Vec<f64>,
}

/// Per-index results of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub s: f64,
    /// Caloric power used for every norm below (α₂).
    pub alpha: f64,
    pub b_initial: BesovNorm,
    pub b_final: BesovNorm,
    /// `‖b(T)‖ / ‖b(0)‖`.
    pub inflation_factor: f64,
    /// Closed-form `‖b₁₀(T)‖_{Ḃ^{-s}}`.
    pub b10_final: f64,
    /// `‖b₁₀(T)‖_{Ḃ^{-s}} / r^{1-β₁-β₂}`.
    pub b10_scaled: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub y_ratio_max: f64,
    pub z_ratio_max: f64,
    pub z_sup_final: f64,
    pub b10_sup_final: f64,
}

/// Everything reported for one value of `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub run_id: String,
    pub analytic_only: bool,
    pub params: InflationParams,
    pub feasibility: FeasibilityReport,
    /// Grid dimensions; `None` in analytic mode.
    pub grid: Option<[usize; 3]>,
    /// `‖u₀‖_{Ḃ^{-θ₁}}` (caloric power α₁).
    pub u0_besov: BesovNorm,
    /// `‖b₀‖_{Ḃ^{-θ₂}}` (caloric power α₂).
    pub b0_besov: BesovNorm,
    /// `C` in `‖u₀‖ + ‖b₀‖ ≤ C (r^{-β₁} + r^{-β₂})`.
    pub smallness_constant: f64,
    pub predicted_exponent: f64,
    pub indices: Vec<IndexReport>,
    pub residuals: Option<ResidualSummary>,
    pub stats: Option<RunStats>,
    pub max_divergence: Option<f64>,
    pub max_energy_audit: Option<f64>,
    pub series: Vec<SeriesRow>,
}

impl RunReport {
    pub fn index(&self, s: f64) -> Option<&IndexReport> {
        self.indices.iter().find(|x| x.s == s)
    }
}

/// Least-squares fit of `log y = a + slope · log r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub s: f64,
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    /// 95% Student-t interval for the slope.
    pub slope_ci95: [f64; 2],
    /// `log y - fit` per point.
    pub residuals: Vec<f64>,
    pub rms_residual: f64,
    pub predicted: f64,
}

pub fn fit_exponent(r: &[f64], y: &[f64], s: f64, predicted: f64) -> Result<ExponentFit> {
    if r.len() != y.len() || r.len() < 3 {
        return Err(Error::Config(format!("a fit needs at least 3 paired points, got {}", r.len().min(y.len()))));
    }
    if let Some(v) = r.iter().chain(y).find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!("log-log fit needs positive finite values, got {v}")));
    }
    let x: Vec<f64> = r.iter().map(|v| v.ln()).collect();
    let z: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let (mx, mz) = (x.iter().sum::<f64>() / n, z.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxz: f64 = x.iter().zip(&z).map(|(a, b)| (a - mx) * (b - mz)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("fit abscissae are all equal".into()));
    }
    let slope = sxz / sxx;
    let intercept = mz - slope * mx;
    let residuals: Vec<f64> = x.iter().zip(&z).map(|(a, b)| b - (intercept + slope * a)).collect();
    let sse: f64 = residuals.iter().map(|e| e * e).sum();
    let dof = n - 2.0;
    let slope_stderr = if dof > 0.0 { (sse / dof / sxx).sqrt() } else { f64::NAN };
    let tq = StudentsT::new(0.0, 1.0, dof)
        .map_err(|e| Error::Domain(format!("t distribution: {e}")))?
        .inverse_cdf(0.975);
    Ok(ExponentFit {
        s,
        slope,
        intercept,
        slope_stderr,
        slope_ci95: [slope - tq * slope_stderr, slope + tq * slope_stderr],
        rms_residual: (sse / n).sqrt(),
        residuals,
        predicted,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub r_list: Vec<u32>,
    pub run_ids: Vec<String>,
    pub predicted_exponent: f64,
    /// Fits of `‖b(T)‖_{Ḃ^{-s}}` (or `‖b₁₀(T)‖` in analytic mode) per `s`.
    pub fits: Vec<ExponentFit>,
    pub runs: Vec<RunReport>,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_series(path: &Path, s_list: &[f64], rows: &[SeriesRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = ["t", "sup_u", "sup_b", "energy", "dissipation"].map(String::from).to_vec();
    header.extend(s_list.iter().map(|s| format!("besov_b_{s}")));
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![fmt(row.t), fmt(row.sup_u), fmt(row.sup_b), fmt(row.energy), fmt(row.dissipation)];
        rec.extend(row.besov_b.iter().map(|&v| fmt(v)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// `dir/<run_id>/{series.csv, summary.json, config.echo.json}`.
pub fn write_run(dir: &Path, cfg: &ExperimentConfig, report: &RunReport) -> Result<()> {
    let d = dir.join(&report.run_id);
    fs::create_dir_all(&d)?;
    write_series(&d.join("series.csv"), &cfg.s_list, &report.series)?;
    write_json(&d.join("summary.json"), report)?;
    write_json(&d.join("config.echo.json"), cfg)
}

/// One directory per run plus `dir/sweep.json` (fits; runs by id only)
/// and `dir/config.echo.json`.
pub fn write_sweep(dir: &Path, cfg: &ExperimentConfig, report: &SweepReport) -> Result<()> {
    fs::create_dir_all(dir)?;
    for run in &report.runs {
        write_run(dir, &cfg.for_r(run.params.r), run)?;
    }
    let summary = SweepReport { runs: Vec::new(), ..report.clone() };
    write_json(&dir.join("sweep.json"), &summary)?;
    write_json(&dir.join("config.echo.json"), cfg)
}
