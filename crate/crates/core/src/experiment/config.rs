use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::DtPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Verify,
    Run,
    Sweep,
}

/// Everything a `verify`, `run` or `sweep` invocation needs. Every field has
/// a default, so a config file may list only what it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub alpha1: f64,
    pub alpha2: f64,
    pub epsilon: f64,
    /// `None` picks the lower end of the admissible θ₁ window.
    pub theta1: Option<f64>,
    pub r: u32,
    /// Overrides `K = ⌈r^ζ⌉`.
    pub k_base: Option<u64>,
    pub r_list: Vec<u32>,
    /// Besov indices `s` of the tracked `Ḃ^{-s}_{∞,∞}` norms of `b`.
    pub s_list: Vec<f64>,
    /// `[n1, n3]` for a slab grid or `[n1, n2, n3]` for a full grid;
    /// empty picks the smallest grid that holds the construction.
    pub grid: Vec<usize>,
    pub slab: bool,
    pub analytic_only: bool,
    pub n_quad: usize,
    pub dt_cfl: f64,
    /// Equal steps instead of the CFL rule.
    pub fixed_steps: Option<usize>,
    pub n_samples: usize,
    pub blowup_cap: f64,
    pub out: Option<PathBuf>,
    pub seed: u64,
    /// 0 uses every available core.
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Run,
            alpha1: 1.0,
            alpha2: 1.0,
            epsilon: 0.1,
            theta1: None,
            r: 2,
            k_base: None,
            r_list: vec![2, 3, 4, 6],
            s_list: vec![1.0],
            grid: Vec::new(),
            slab: true,
            analytic_only: false,
            n_quad: 32,
            dt_cfl: 0.5,
            fixed_steps: None,
            n_samples: 16,
            blowup_cap: 1e8,
            out: None,
            seed: 0,
            workers: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.s_list.is_empty() {
            return bad("s_list must not be empty".into());
        }
        if let Some(s) = self.s_list.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return bad(format!("Besov indices must be positive, got {s}"));
        }
        if self.mode == Mode::Sweep {
            if self.r_list.len() < 3 {
                return bad(format!("a sweep needs at least 3 values of r, got {}", self.r_list.len()));
            }
            if self.r_list.windows(2).any(|w| w[1] <= w[0]) {
                return bad("r_list must be strictly increasing".into());
            }
        }
        if self.r == 0 || self.r_list.contains(&0) {
            return bad("r must be positive".into());
        }
        match (self.slab, self.grid.len()) {
            (_, 0) | (true, 2) | (false, 3) => {}
            (true, n) => return bad(format!("a slab grid takes 2 sizes, got {n}")),
            (false, n) => return bad(format!("a full grid takes 3 sizes, got {n}")),
        }
        if self.k_base == Some(0) {
            return bad("k_base must be positive".into());
        }
        if self.n_quad == 0 {
            return bad("n_quad must be positive".into());
        }
        if !(self.dt_cfl > 0.0) {
            return bad(format!("CFL number must be positive, got {}", self.dt_cfl));
        }
        if self.n_samples == 0 {
            return bad("n_samples must be positive".into());
        }
        if self.fixed_steps == Some(0) {
            return bad("fixed_steps must be positive".into());
        }
        Ok(())
    }

    pub fn dt_policy(&self) -> DtPolicy {
        match self.fixed_steps {
            Some(n) => DtPolicy::FixedSteps(n),
            None => DtPolicy::Cfl { courant: self.dt_cfl, recheck_every: 16 },
        }
    }

    /// Copy with a different `r` for one member of a sweep.
    pub fn for_r(&self, r: u32) -> Self {
        Self { r, mode: Mode::Run, ..self.clone() }
    }
}
