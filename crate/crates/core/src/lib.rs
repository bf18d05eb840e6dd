//! Norm-inflation laboratory for the incompressible MHD system with
//! fractional dissipation `(-Δ)^{α₁}` on velocity and `(-Δ)^{α₂}` on the
//! magnetic field, posed on the 2π-periodic torus.

pub mod besov;
pub mod construction;
pub mod error;
pub mod experiment;
pub mod plane_wave;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
