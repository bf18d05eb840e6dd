//! The dyadic plane-wave initial data and the parameter constraints that
//! make the inflation argument work.

mod data;
mod feasibility;
mod lemmas;
mod params;

pub use data::{build_initial_data, initial_waves, minimal_slab_grid, required_cutoffs};
pub use feasibility::{check_feasibility, FeasibilityEntry, FeasibilityReport};
pub use lemmas::{initial_besov, lemma_k_report, LadderReport};
pub use params::{
    derive_params, gamma_interval, theta1_interval, InflationParams, ETA, K_DIRECTION, V, V_PRIME,
};
