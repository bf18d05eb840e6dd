//! Pseudospectral evolution of the fractional MHD system with an
//! exponential integrator, and the first-iteration residuals.

mod etd;
mod scaling;
mod simulate;

pub use etd::{DtPolicy, Dynamics, SolverState, Stepper, Tendency};
pub use scaling::{dilate, dilated_grid, scaling_symmetry_check};
pub use simulate::{
    evolve, first_iteration_residuals, integrate, residual_bound, simulate, Integration, Residual,
    RunStats, Sample, SimulationConfig, Trajectory,
};
