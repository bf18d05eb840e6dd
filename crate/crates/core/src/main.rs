use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gmhd_core::experiment::{
    run_single, run_sweep, run_verify, write_run, write_sweep, ExperimentConfig, Mode, RunReport,
};
use gmhd_core::Result;

#[derive(Parser)]
#[command(name = "gmhd", version, about = "Norm-inflation experiments for fractional MHD on the torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the cross-module oracle suite; exits nonzero on any failure.
    Verify(Flags),
    /// Build the data for one r, evolve to T and report.
    Run(Flags),
    /// Run every r in --r-list and fit the growth exponent.
    Sweep(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// JSON config; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    theta1: Option<f64>,
    #[arg(long)]
    r: Option<u32>,
    /// Base wavenumber K (default ⌈r^ζ⌉).
    #[arg(long)]
    k_base: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    r_list: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    s_list: Option<Vec<f64>>,
    /// n1,n3 (slab) or n1,n2,n3 (full 3-D).
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<usize>>,
    #[arg(long, conflicts_with = "full3d")]
    slab: bool,
    #[arg(long)]
    full3d: bool,
    /// Skip the solver and use the closed-form low mode of b₁.
    #[arg(long)]
    analytic_only: bool,
    #[arg(long)]
    n_quad: Option<usize>,
    #[arg(long)]
    dt_cfl: Option<f64>,
    /// Equal steps instead of the CFL rule.
    #[arg(long)]
    fixed_steps: Option<usize>,
    #[arg(long)]
    n_samples: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
}

impl Flags {
    fn resolve(self, mode: Mode) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::from_json_file(p)?,
            None => ExperimentConfig::default(),
        };
        c.mode = mode;
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { c.$f = v; } )* };
        }
        set!(alpha1, alpha2, epsilon, r, r_list, s_list, grid, n_quad, dt_cfl, n_samples, seed, workers);
        if self.theta1.is_some() {
            c.theta1 = self.theta1;
        }
        if self.k_base.is_some() {
            c.k_base = self.k_base;
        }
        if self.fixed_steps.is_some() {
            c.fixed_steps = self.fixed_steps;
        }
        if self.out.is_some() {
            c.out = self.out;
        }
        if self.slab {
            c.slab = true;
        }
        if self.full3d {
            c.slab = false;
        }
        if self.analytic_only {
            c.analytic_only = true;
        }
        c.validate()?;
        Ok(c)
    }
}

fn print_run(rep: &RunReport) {
    println!("run {}  T = {:.6e}  K = {}  delta = {:.4e}", rep.run_id, rep.params.t_final, rep.params.k_base, rep.params.delta);
    println!(
        "  data: |u0|_B(-{}) = {:.6e}  |b0|_B(-{}) = {:.6e}  C = {:.4}",
        rep.params.theta1, rep.u0_besov.value, rep.params.theta2, rep.b0_besov.value, rep.smallness_constant
    );
    for ix in &rep.indices {
        println!(
            "  s = {}: |b(0)| = {:.6e}  |b(T)| = {:.6e}  factor = {:.4}  |b10(T)| = {:.6e}",
            ix.s, ix.b_initial.value, ix.b_final.value, ix.inflation_factor, ix.b10_final
        );
    }
    if let Some(r) = &rep.residuals {
        println!("  residual ratios: y {:.4e}  z {:.4e}", r.y_ratio_max, r.z_ratio_max);
    }
}

fn execute(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Verify(f) => {
            let cfg = f.resolve(Mode::Verify)?;
            let rep = run_verify(&cfg);
            for c in &rep.checks {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                println!("{tag} {:<22} value {:.3e} tol {:.1e}  {}", c.name, c.value, c.tolerance, c.detail);
            }
            if let Some(dir) = &cfg.out {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join("verify.json"), serde_json::to_string_pretty(&rep)? + "\n")?;
            }
            Ok(rep.passed)
        }
        Command::Run(f) => {
            let cfg = f.resolve(Mode::Run)?;
            let rep = run_single(&cfg)?;
            print_run(&rep);
            if let Some(dir) = &cfg.out {
                write_run(dir, &cfg, &rep)?;
            }
            Ok(true)
        }
        Command::Sweep(f) => {
            let cfg = f.resolve(Mode::Sweep)?;
            let rep = run_sweep(&cfg)?;
            for run in &rep.runs {
                print_run(run);
            }
            for fit in &rep.fits {
                println!(
                    "fit s = {}: slope {:.4} (95% CI [{:.4}, {:.4}], rms residual {:.2e}), predicted {:.4}",
                    fit.s, fit.slope, fit.slope_ci95[0], fit.slope_ci95[1], fit.rms_residual, fit.predicted
                );
            }
            if let Some(dir) = &cfg.out {
                write_sweep(dir, &cfg, &rep)?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
