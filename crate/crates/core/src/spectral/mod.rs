//! Periodic Fourier representation of real vector fields on the 2π-torus.

mod fft;
mod field;
mod grid;
mod ops;
mod trig;

pub(crate) use fft::{analyze_real, render_real};
pub use field::{PhysicalVectorField, SpectralVectorField};
pub use grid::{dot, norm_sq, Grid, Mode};
pub(crate) use ops::{check_divergence_free, derivative, project_in_place};
pub use ops::{
    advect, divergence_max, fractional_semigroup, grid_for_band, leray_project, sup_norm,
    sup_norm_refined, to_physical, to_spectral,
};
pub use trig::{SupEstimate, TrigPolynomial};
pub(crate) use trig::golden_max;
