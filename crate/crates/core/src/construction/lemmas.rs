use serde::{Deserialize, Serialize};

use super::params::{InflationParams, ETA};
use crate::besov::{BesovNorm, BesovSpec, caloric_besov_norm};
use crate::error::Result;
use crate::spectral::SpectralVectorField;

/// Numerical audit of the ladder identities and sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    /// `k_i·v = k'_i·v' = k_i·v' = 0` and `k'_i·v = 1` in integer arithmetic.
    pub orthogonality_exact: bool,
    /// `Σ_{j<i} |k_j|^θ / |k_{i-1}|^θ` for `i = 2..=r`.
    pub partial_sum_ratios: Vec<f64>,
    pub partial_sum_ratios_prime: Vec<f64>,
    /// Upper limit `2^θ/(2^θ - 1)` of the geometric ratio.
    pub partial_sum_bound: f64,
    pub partial_sums_within_bound: bool,
    /// `t^{γ/(2α)} Σ |k_i|^γ e^{-|k_i|^{2α} t}`.
    pub damped_sum_constant: f64,
    pub damped_sum_constant_prime: f64,
}

/// Checks the ladder lemma for exponents `theta`, `gamma_exp`, semigroup
/// power `alpha` and time `t`.
pub fn lemma_k_report(p: &InflationParams, theta: f64, gamma_exp: f64, alpha: f64, t: f64) -> LadderReport {
    let v = [0i128, 0, 1];
    let vp = [0i128, 1, 0];
    let ks = p.ks();
    let kps = p.k_primes();
    let orthogonality_exact = ks.iter().zip(&kps).all(|(k, kp)| {
        k.dot(&v) == Some(0)
            && k.dot(&vp) == Some(0)
            && kp.dot(&vp) == Some(0)
            && kp.dot(&v) == Some(1)
            && kp.checked_sub(k).map(|d| d.0) == Some(ETA)
    });
    let ratios = |ws: &[crate::plane_wave::Wavevector]| -> Vec<f64> {
        (2..=ws.len())
            .map(|i| {
                let s: f64 = ws[..i - 1].iter().map(|k| k.norm().powf(theta)).sum();
                s / ws[i - 2].norm().powf(theta)
            })
            .collect()
    };
    let partial_sum_ratios = ratios(&ks);
    let partial_sum_ratios_prime = ratios(&kps);
    let bound = 2f64.powf(theta) / (2f64.powf(theta) - 1.0);
    let within = partial_sum_ratios
        .iter()
        .all(|&x| x >= 1.0 - 1e-12 && x <= bound * (1.0 + 1e-12));
    // the shifted ladder is not exactly geometric; it only needs a bounded ratio
    let within_prime = partial_sum_ratios_prime.iter().all(|&x| x >= 1.0 - 1e-12 && x <= 2.0 * bound);
    let damped = |ws: &[crate::plane_wave::Wavevector]| -> f64 {
        t.powf(gamma_exp / (2.0 * alpha))
            * ws
                .iter()
                .map(|k| k.norm().powf(gamma_exp) * (-k.rate(alpha) * t).exp())
                .sum::<f64>()
    };
    LadderReport {
        orthogonality_exact,
        partial_sum_bound: bound,
        partial_sums_within_bound: within && within_prime,
        damped_sum_constant: damped(&ks),
        damped_sum_constant_prime: damped(&kps),
        partial_sum_ratios,
        partial_sum_ratios_prime,
    }
}

/// `‖u₀‖` in `Ḃ^{-θ₁}` (caloric power α₁) and `‖b₀‖` in `Ḃ^{-θ₂}`
/// (caloric power α₂), default windows.
pub fn initial_besov(
    p: &InflationParams,
    u0: &SpectralVectorField,
    b0: &SpectralVectorField,
) -> Result<(BesovNorm, BesovNorm)> {
    let nu = caloric_besov_norm(u0, &BesovSpec::default_for(u0, p.theta1, p.alpha1)?)?;
    let nb = caloric_besov_norm(b0, &BesovSpec::default_for(b0, p.theta2, p.alpha2)?)?;
    Ok((nu, nb))
}
