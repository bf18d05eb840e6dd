use gmhd_core::spectral::{
    advect, divergence_max, fractional_semigroup, leray_project, to_physical, to_spectral, Grid,
    PhysicalVectorField, SpectralVectorField,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grids() -> impl Strategy<Value = Grid> {
    prop_oneof![
        Just(Grid::slab(8, 8).unwrap()),
        Just(Grid::slab(12, 6).unwrap()),
        Just(Grid::full(8, 6, 4).unwrap()),
        Just(Grid::full(6, 6, 6).unwrap()),
    ]
}

/// Band-limited field from uniform random samples.
fn random_field(g: Grid, seed: u64) -> SpectralVectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.len();
    let vals = [0, 1, 2].map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>());
    to_spectral(&PhysicalVectorField::new(g, vals).unwrap())
}

fn solenoidal(g: Grid, seed: u64) -> SpectralVectorField {
    leray_project(&random_field(g, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn physical_round_trip(g in grids(), seed in any::<u64>()) {
        let f = random_field(g, seed);
        let back = to_spectral(&to_physical(&f).unwrap());
        prop_assert!((&back - &f).max_abs_coeff() < 1e-12);
    }

    #[test]
    fn leray_is_idempotent_and_solenoidal(g in grids(), seed in any::<u64>()) {
        let p = leray_project(&random_field(g, seed));
        prop_assert!((&leray_project(&p) - &p).max_abs_coeff() < 1e-14);
        prop_assert!(divergence_max(&p) < 1e-12);
    }

    #[test]
    fn semigroup_composes(g in grids(), seed in any::<u64>(), alpha in 0.5f64..2.0, t1 in 0.0f64..1.0, t2 in 0.0f64..1.0) {
        let f = random_field(g, seed);
        let two = fractional_semigroup(&fractional_semigroup(&f, t1, alpha).unwrap(), t2, alpha).unwrap();
        let one = fractional_semigroup(&f, t1 + t2, alpha).unwrap();
        prop_assert!((&two - &one).max_abs_coeff() < 1e-14);
    }

    #[test]
    fn semigroup_contracts_energy(g in grids(), seed in any::<u64>(), alpha in 0.5f64..2.0, t in 0.0f64..1.0) {
        let f = random_field(g, seed);
        let s = fractional_semigroup(&f, t, alpha).unwrap();
        prop_assert!(s.energy() <= f.energy() * (1.0 + 1e-15));
        // mean is untouched
        let (a, b) = (s.mean(), f.mean());
        prop_assert!((0..3).all(|i| (a[i] - b[i]).abs() < 1e-15));
    }

    #[test]
    fn slab_fields_stay_slab_under_products(seed in any::<u64>()) {
        let gs = Grid::slab(8, 8).unwrap();
        let gf = Grid::full(8, 6, 8).unwrap();
        let (u, v) = (solenoidal(gs, seed), random_field(gs, seed ^ 1));
        let slab = advect(&u, &v).unwrap();
        let full = advect(&u.transfer_to(gf).unwrap(), &v.transfer_to(gf).unwrap()).unwrap();
        prop_assert!(full.off_slab_max() < 1e-14);
        prop_assert!((&full - &slab.transfer_to(gf).unwrap()).max_abs_coeff() < 1e-13);
    }

    #[test]
    fn lorentz_and_stretching_terms_cancel(g in grids(), seed in any::<u64>()) {
        let (u, b) = (solenoidal(g, seed), solenoidal(g, seed.wrapping_add(7)));
        let lhs = advect(&b, &b).unwrap().inner(&u) + advect(&b, &u).unwrap().inner(&b);
        prop_assert!(lhs.abs() < 1e-11, "{}", lhs);
    }
}
