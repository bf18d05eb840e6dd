//! Closed-form diffusion and pairwise Duhamel interaction of plane waves,
//! with a quadrature oracle for the bilinear Duhamel operator.

mod b1;
mod bilinear;
mod wave;

pub use b1::{
    b1_bounds, b1_closed_form, e_decomposition, first_iterate_grid, first_iterates_numeric, B1Bounds,
    B1Parts,
};
pub use bilinear::{bilinear_numeric, lemma21_ratio, semigroup_orbit};
pub use wave::{duhamel_weight, interact_diffused, Phase, PlaneWave, WaveSum, Wavevector};
