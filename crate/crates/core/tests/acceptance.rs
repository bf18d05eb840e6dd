//! The ten acceptance criteria, each at its stated tolerance and time
//! budget. One line per criterion goes straight to stderr so it shows even
//! when the harness captures output.

use std::io::Write;
use std::time::{Duration, Instant};

use gmhd_core::besov::{caloric_besov_norms, plane_wave_besov_exact};
use gmhd_core::construction::{build_initial_data, derive_params, initial_waves, minimal_slab_grid, InflationParams};
use gmhd_core::experiment::{run_sweep, ExperimentConfig, Mode};
use gmhd_core::plane_wave::{
    b1_closed_form, bilinear_numeric, first_iterate_grid, first_iterates_numeric, interact_diffused,
    semigroup_orbit, PlaneWave, WaveSum, Wavevector,
};
use gmhd_core::solver::{scaling_symmetry_check, simulate, DtPolicy, Integration, SimulationConfig};
use gmhd_core::spectral::{fractional_semigroup, sup_norm_refined, Grid, SpectralVectorField};
use gmhd_core::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: usize, title: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let pass = out.pass && in_time;
    let line = format!(
        "criterion {id:>2} {:<4} {title}: {} [{:.1} s of {} s]\n",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    pass
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn random_solenoidal_cosine(rng: &mut ChaCha8Rng, kmax: i128) -> PlaneWave {
    loop {
        let k = [0; 3].map(|_: i128| rng.random_range(-kmax..=kmax));
        if k == [0, 0, 0] {
            continue;
        }
        let raw = [0; 3].map(|_: i32| rng.random_range(-1.0..1.0f64));
        let kk: f64 = k.iter().map(|&x| (x * x) as f64).sum();
        let dot: f64 = k.iter().zip(&raw).map(|(&a, b)| a as f64 * b).sum();
        let v = [0, 1, 2].map(|a| raw[a] - dot / kk * k[a] as f64);
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n < 0.1 {
            continue;
        }
        return PlaneWave::cosine(rng.random_range(0.5..2.0), v.map(|x| x / n), Wavevector::new(k[0], k[1], k[2]));
    }
}

/// `e^{-|k|^{2α}t}` applied by hand to the two Fourier coefficients of
/// `v cos(k·x)`.
fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = Grid::full(16, 16, 16).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let w = random_solenoidal_cosine(&mut rng, 7);
        let alpha = rng.random_range(1.0..=2.0);
        let t = rng.random_range(0.0..=1.0);
        let f = WaveSum::new(vec![w]).to_field(g).unwrap();
        let got = fractional_semigroup(&f, t, alpha).unwrap();
        let k = w.wavevector.0.map(|x| x as i64);
        let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        let decay = (-k2.powf(alpha) * t).exp();
        let half = w.amplitude.map(|a| Complex64::new(0.5 * w.coefficient * a * decay, 0.0));
        for m in [k, k.map(|x| -x)] {
            let c = got.coeff(m).unwrap();
            for a in 0..3 {
                worst = worst.max((c[a] - half[a]).norm());
            }
        }
        let rest = (&got - &f.scaled(decay)).max_abs_coeff();
        worst = worst.max(rest);
    }
    Outcome { pass: worst < 1e-13, detail: format!("max coefficient error {worst:.2e} (tol 1e-13)") }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = Grid::full(16, 16, 16).unwrap();
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    while pairs < 20 {
        let (w1, w2) = (random_solenoidal_cosine(&mut rng, 3), random_solenoidal_cosine(&mut rng, 3));
        let alpha = rng.random_range(1.0..=2.0);
        let t = rng.random_range(0.05..0.5);
        let exact = interact_diffused(&w1, &w2, alpha, t).unwrap();
        if exact.is_empty() {
            continue;
        }
        let exact = exact.to_field(g).unwrap();
        let scale = sup_norm_refined(&exact, 2);
        if scale < 1e-10 {
            continue;
        }
        let f1 = WaveSum::new(vec![w1]).to_field(g).unwrap();
        let f2 = WaveSum::new(vec![w2]).to_field(g).unwrap();
        let num = bilinear_numeric(semigroup_orbit(&f1, alpha), semigroup_orbit(&f2, alpha), t, alpha, 32).unwrap();
        worst = worst.max(sup_norm_refined(&(&num - &exact), 2) / scale);
        pairs += 1;
    }
    Outcome { pass: worst < 1e-8, detail: format!("max relative sup error {worst:.2e} over 20 pairs (tol 1e-8)") }
}

fn data_on(p: &InflationParams, g: Grid) -> (SpectralVectorField, SpectralVectorField) {
    let (u, b) = initial_waves(p);
    (u.to_field(g).unwrap(), b.to_field(g).unwrap())
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for (a1, a2) in [(1.0, 1.0), (1.2, 1.5)] {
        for r in [1, 2, 4] {
            let p = derive_params(a1, a2, 0.1, r, None).unwrap();
            let (u0, b0) = data_on(&p, first_iterate_grid(&p).unwrap());
            let scale = sup_norm_refined(&u0, 2).max(sup_norm_refined(&b0, 2));
            for frac in [0.25, 0.5, 1.0] {
                let (u1, _) = first_iterates_numeric(&p, frac * p.t_final, 32).unwrap();
                worst = worst.max(sup_norm_refined(&u1, 2) / scale);
            }
        }
    }
    Outcome { pass: worst < 1e-10, detail: format!("max |u1|/|data| {worst:.2e} (tol 1e-10)") }
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    for (a1, a2) in [(1.0, 1.0), (1.2, 1.5)] {
        let p = derive_params(a1, a2, 0.1, 2, None).unwrap();
        let t = 0.5 * p.t_final;
        let g = first_iterate_grid(&p).unwrap();
        let (u0, b0) = data_on(&p, g);
        // only the transport term survives for this data
        let num = bilinear_numeric(semigroup_orbit(&u0, a2), semigroup_orbit(&b0, a2), t, a2, 32).unwrap();
        let exact = b1_closed_form(&p, t).unwrap().total().to_field(g).unwrap();
        worst = worst.max(sup_norm_refined(&(&num - &exact), 2) / sup_norm_refined(&exact, 2));
    }
    Outcome { pass: worst < 1e-7, detail: format!("max relative error {worst:.2e} at r = 2, t = T/2 (tol 1e-7)") }
}

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    // κ = 17.5 is not a lattice length; (15, 0, 9) has |k| = √306 ≈ 17.49
    for k in [[1i64, 0, 0], [2, 0, 0], [4, 0, 0], [8, 0, 0], [15, 0, 9]] {
        let kappa = ((k[0] * k[0] + k[2] * k[2]) as f64).sqrt();
        let g = Grid::slab(64, 32).unwrap();
        let mut f = SpectralVectorField::zeros(g);
        f.add_mode(k, [0.0, 0.5, 0.0].map(|x| Complex64::new(x, 0.0))).unwrap();
        for alpha in [1.0, 1.5] {
            for n in caloric_besov_norms(&f, &[0.5, 1.0, 2.0], alpha).unwrap() {
                worst = worst.max((n.value / plane_wave_besov_exact(kappa, n.s, alpha) - 1.0).abs());
            }
        }
    }
    Outcome { pass: worst < 0.01, detail: format!("max relative deviation {worst:.2e} (tol 1e-2)") }
}

fn criterion_6() -> Outcome {
    let p = derive_params(1.0, 1.0, 0.1, 4, None).unwrap();
    let rep = p.feasibility();
    let families = ["theta_window", "gamma_floor", "zeta_gamma_window"];
    let ok = p.theta1 == 1.0 && p.theta2 == 1.0 && families.iter().all(|f| rep.family_passes(f)) && rep.overall;
    let bad = derive_params(1.0, 1.0, 0.1, 4, Some(3.0));
    let named = matches!(&bad, Err(Error::Infeasible { constraint, .. }) if constraint == "theta_window");
    Outcome {
        pass: ok && named,
        detail: format!(
            "theta = ({}, {}), gamma = {:.4}, zeta = {:.4}, families pass: {ok}; theta1 = 3 rejected by theta_window: {named}",
            p.theta1, p.theta2, p.gamma, p.zeta_exp
        ),
    }
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for eps in [0.05, 0.1, 0.15] {
        let cfg = ExperimentConfig {
            mode: Mode::Sweep,
            epsilon: eps,
            analytic_only: true,
            r_list: vec![2, 4, 8, 16, 32, 64],
            s_list: vec![1.0],
            n_samples: 1,
            ..Default::default()
        };
        let fit = &run_sweep(&cfg).unwrap().fits[0];
        let ok = (fit.slope - 2.0 * eps).abs() <= 0.05;
        pass &= ok;
        parts.push(format!("eps {eps}: slope {:.4} vs {:.2}", fit.slope, 2.0 * eps));
    }
    Outcome { pass, detail: format!("{} (tol 0.05)", parts.join(", ")) }
}

fn sci(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn criterion_8() -> Outcome {
    let cfg = ExperimentConfig {
        mode: Mode::Sweep,
        r_list: vec![2, 3, 4, 6],
        s_list: vec![1.0],
        n_samples: 8,
        ..Default::default()
    };
    let sweep = run_sweep(&cfg).unwrap();
    let finals: Vec<f64> = sweep.runs.iter().map(|r| r.indices[0].b_final.value).collect();
    let increasing = finals.windows(2).all(|w| w[1] > w[0]);
    let factor = sweep.runs.last().unwrap().indices[0].inflation_factor;
    // a ratio series is stable if it stays within a factor 2, or is
    // round-off of an identically vanishing remainder
    let stable = |xs: Vec<f64>| {
        let (lo, hi) = xs.iter().fold((f64::INFINITY, 0f64), |(l, h), &x| (l.min(x), h.max(x)));
        hi < 1e-12 || (lo > 0.0 && hi / lo <= 2.0)
    };
    let ys: Vec<f64> = sweep.runs.iter().map(|r| r.residuals.unwrap().y_ratio_max).collect();
    let zs: Vec<f64> = sweep.runs.iter().map(|r| r.residuals.unwrap().z_ratio_max).collect();
    let (ys_ok, zs_ok) = (stable(ys.clone()), stable(zs.clone()));
    Outcome {
        pass: increasing && factor > 2.0 && ys_ok && zs_ok,
        detail: format!(
            "|b(T)| = {finals:.4?} increasing: {increasing}; factor at r = 6: {factor:.4} (need > 2); y ratios {} stable: {ys_ok}; z ratios {} stable: {zs_ok}",
            sci(&ys),
            sci(&zs)
        ),
    }
}

fn criterion_9() -> Outcome {
    let p = derive_params(1.0, 1.0, 0.1, 2, None).unwrap().with_k_base(4).unwrap();
    let g = Grid::full(64, 64, 64).unwrap();
    let (u0, b0) = build_initial_data(&p, g).unwrap();
    let cfg = SimulationConfig { integration: Integration::new(1.0, 1.0), t_final: p.t_final, n_samples: 8, s_list: vec![] };
    let tr = simulate(&u0, &b0, &cfg, None).unwrap();
    let (div, slab) = (tr.max_divergence(), tr.max_off_slab());
    // audit convergence under step halving over a shorter horizon
    let audit = |n: usize| {
        let c = SimulationConfig {
            integration: Integration { dt: DtPolicy::FixedSteps(n), ..Integration::new(1.0, 1.0) },
            t_final: p.t_final / 8.0,
            n_samples: 1,
            s_list: vec![],
        };
        simulate(&u0, &b0, &c, None).unwrap().max_energy_audit()
    };
    let (a1, a2) = (audit(8), audit(16));
    let order = (a1 / a2).log2();
    Outcome {
        pass: div < 1e-10 && slab < 1e-12 && order > 1.7,
        detail: format!(
            "64^3, {} steps: divergence {div:.2e} (tol 1e-10), off-slab {slab:.2e} (tol 1e-12), audit order {order:.2} ({a1:.2e} -> {a2:.2e})",
            tr.stats.steps
        ),
    }
}

fn criterion_10() -> Outcome {
    let p = derive_params(1.0, 1.0, 0.1, 2, None).unwrap();
    let (u0, b0) = build_initial_data(&p, minimal_slab_grid(&p).unwrap()).unwrap();
    let d = scaling_symmetry_check(&u0, &b0, 1.0, 2, p.t_final, 200).unwrap();
    Outcome { pass: d < 1e-6, detail: format!("discrepancy {d:.2e} (tol 1e-6)") }
}

#[test]
fn acceptance_criteria() {
    let results = [
        run(1, "semigroup plane-wave exactness", secs(5), criterion_1),
        run(2, "bilinear oracle equivalence", secs(30), criterion_2),
        run(3, "u1 vanishes", secs(60), criterion_3),
        run(4, "b1 decomposition", secs(60), criterion_4),
        run(5, "Besov plane-wave exactness", secs(30), criterion_5),
        run(6, "feasibility ledger", secs(1), criterion_6),
        run(7, "analytic inflation exponent", secs(60), criterion_7),
        run(8, "full-solver inflation trend", secs(1800), criterion_8),
        run(9, "conservation and structure at 64^3", secs(600), criterion_9),
        run(10, "scaling symmetry", secs(300), criterion_10),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, &ok)| !ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
