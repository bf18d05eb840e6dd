//! Configuration, verification suite, single runs, r-sweeps and report
//! files.

mod config;
mod report;
mod runner;
mod verify;

pub use config::{ExperimentConfig, Mode};
pub use report::{
    fit_exponent, write_run, write_series, write_sweep, ExponentFit, IndexReport, ResidualSummary,
    RunReport, SeriesRow, SweepReport,
};
pub use runner::{run_grid, run_id, run_single, run_sweep};
pub use verify::{run_verify, CheckResult, VerifyReport};
