use serde::{Deserialize, Serialize};

use super::feasibility::{check_feasibility, FeasibilityReport};
use crate::error::{Error, Result};
use crate::plane_wave::Wavevector;

/// Parameters of the dyadic plane-wave construction.
///
/// Waves: `k_i = 2^{i-1} K e₁`, `k'_i = k_i + e₃` for `i = 1..=r`, with
/// amplitudes `v = e₃` (velocity) and `v' = e₂` (magnetic field).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InflationParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub r: u32,
    pub epsilon: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub gamma: f64,
    pub zeta_exp: f64,
    /// `K`, the base wavenumber `|k_1|`.
    pub k_base: i128,
    /// `T = r^{-γ}`.
    pub t_final: f64,
    /// `max(r^{-β₁}, r^{-β₂}, T)`.
    pub delta: f64,
}

/// Direction of the wave ladder.
pub const K_DIRECTION: [i128; 3] = [1, 0, 0];
/// Shift between the velocity and magnetic ladders.
pub const ETA: [i128; 3] = [0, 0, 1];
pub const V: [f64; 3] = [0.0, 0.0, 1.0];
pub const V_PRIME: [f64; 3] = [0.0, 1.0, 0.0];

/// `[lower, upper]` for θ₁ under `θ₁ + θ₂ = 2α₂` and the θ₁, θ₂ windows,
/// including `θ₂ ≤ 2α₁ - 1`.
pub fn theta1_interval(alpha1: f64, alpha2: f64) -> (f64, f64) {
    let lower = 1f64
        .max(2.0 * alpha2 - (4.0 * alpha1 - alpha1 / alpha2 - 1.0))
        .max(2.0 * alpha2 - 2.0 * alpha1 + 1.0);
    let upper = (4.0 * alpha2 - alpha2 / alpha1 - 1.0).min(2.0 * alpha2 - 1.0);
    (lower, upper)
}

/// `(γ_lower, γ_upper)` for the given β and ζ.
pub fn gamma_interval(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64, zeta: f64) -> (f64, f64) {
    let gap = 1.0 - beta1 - beta2;
    let lower = (gap / (1.0 - 1.0 / (2.0 * alpha1))).max(gap / (1.0 - 1.0 / (2.0 * alpha2)));
    (lower, 2.0 * alpha2 * zeta)
}

/// Largest ladder length whose wave vectors and pairwise sums fit in `i128`.
fn max_rungs(k_base: i128) -> u32 {
    let bits = 128 - k_base.leading_zeros();
    125u32.saturating_sub(bits)
}

impl InflationParams {
    /// Default parameter choice: `β₁ = β₂ = ½ - ε`, θ₁ at the midpoint of its
    /// window (or `theta1` if admissible), `ζ = (1 - β₁)/(2θ₂)`, γ at the
    /// midpoint of its window, `K = ⌈r^ζ⌉`, `T = r^{-γ}`.
    pub fn derive(alpha1: f64, alpha2: f64, epsilon: f64, r: u32, theta1: Option<f64>) -> Result<Self> {
        if !(alpha1 >= 1.0 && alpha2 >= 1.0) || !alpha1.is_finite() || !alpha2.is_finite() {
            return Err(Error::Domain(format!("dissipation powers must be >= 1, got ({alpha1}, {alpha2})")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0 / 6.0) {
            return Err(Error::Domain(format!("epsilon must lie in (0, 1/6), got {epsilon}")));
        }
        if r == 0 {
            return Err(Error::Domain("need at least one wave (r >= 1)".into()));
        }
        let beta = 0.5 - epsilon;
        let (lo, hi) = theta1_interval(alpha1, alpha2);
        let theta1 = match theta1 {
            Some(t) => {
                let upper1 = 4.0 * alpha2 - alpha2 / alpha1 - 1.0;
                if !(t >= 1.0 && t <= upper1) {
                    return Err(Error::Infeasible {
                        constraint: "theta_window".into(),
                        detail: format!("need 1 <= theta1 <= 4*alpha2 - alpha2/alpha1 - 1 = {upper1}, got {t}"),
                    });
                }
                if !(t >= lo && t <= hi) {
                    return Err(Error::Infeasible {
                        constraint: "theta_window".into(),
                        detail: format!("theta1 = {t} leaves theta2 = {} outside its window; admissible theta1 in [{lo}, {hi}]", 2.0 * alpha2 - t),
                    });
                }
                t
            }
            None => {
                if lo > hi {
                    return Err(Error::Infeasible {
                        constraint: "theta_window".into(),
                        detail: format!("empty theta1 window [{lo}, {hi}]"),
                    });
                }
                0.5 * (lo + hi)
            }
        };
        let theta2 = 2.0 * alpha2 - theta1;
        let zeta_exp = 0.5 * (1.0 - beta) / theta2;
        let (glo, ghi) = gamma_interval(alpha1, alpha2, beta, beta, zeta_exp);
        if !(glo < ghi) {
            return Err(Error::Infeasible {
                constraint: "zeta_gamma_window".into(),
                detail: format!("empty gamma window ({glo}, {ghi})"),
            });
        }
        let gamma = 0.5 * (glo + ghi);
        let k_base = (r as f64).powf(zeta_exp).ceil() as i128;
        let mut p = Self {
            alpha1,
            alpha2,
            r,
            epsilon,
            beta1: beta,
            beta2: beta,
            theta1,
            theta2,
            gamma,
            zeta_exp,
            k_base,
            t_final: 0.0,
            delta: 0.0,
        };
        p.refresh();
        p.check_ladder()?;
        let report = check_feasibility(&p);
        if let Some(e) = report.first_failure() {
            return Err(Error::Infeasible {
                constraint: e.family.clone(),
                detail: format!("{} (margin {:.3e})", e.expression, e.margin),
            });
        }
        Ok(p)
    }

    fn refresh(&mut self) {
        let r = self.r as f64;
        self.t_final = r.powf(-self.gamma);
        self.delta = r.powf(-self.beta1).max(r.powf(-self.beta2)).max(self.t_final);
    }

    fn check_ladder(&self) -> Result<()> {
        if self.k_base < 1 {
            return Err(Error::Domain(format!("K must be positive, got {}", self.k_base)));
        }
        let limit = max_rungs(self.k_base);
        if self.r > limit {
            return Err(Error::Domain(format!(
                "r = {} overflows 128-bit wave vectors for K = {} (limit {limit})",
                self.r, self.k_base
            )));
        }
        Ok(())
    }

    /// Replaces `K`; `T` and the exponents are kept.
    pub fn with_k_base(mut self, k_base: i128) -> Result<Self> {
        self.k_base = k_base;
        self.check_ladder()?;
        Ok(self)
    }

    /// Replaces γ and recomputes `T` and δ. No feasibility check.
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self.refresh();
        self
    }

    /// Replaces the amplitude exponents. No feasibility check.
    pub fn with_betas(mut self, beta1: f64, beta2: f64) -> Self {
        self.beta1 = beta1;
        self.beta2 = beta2;
        self.refresh();
        self
    }

    /// `k_i`, 1-based.
    pub fn k(&self, i: u32) -> Wavevector {
        assert!(i >= 1 && i <= self.r, "wave index {i} out of 1..={}", self.r);
        let mag = self.k_base << (i - 1);
        Wavevector(K_DIRECTION.map(|d| d * mag))
    }

    /// `k'_i = k_i + η`, 1-based.
    pub fn k_prime(&self, i: u32) -> Wavevector {
        self.k(i) + Wavevector(ETA)
    }

    pub fn ks(&self) -> Vec<Wavevector> {
        (1..=self.r).map(|i| self.k(i)).collect()
    }

    pub fn k_primes(&self) -> Vec<Wavevector> {
        (1..=self.r).map(|i| self.k_prime(i)).collect()
    }

    /// `1 - β₁ - β₂`, the growth exponent of the inflated norm.
    pub fn predicted_exponent(&self) -> f64 {
        1.0 - self.beta1 - self.beta2
    }

    /// Largest |m₁| among the data modes, `|k_r|`.
    pub fn top_wavenumber(&self) -> i128 {
        self.k(self.r).0[0]
    }

    pub fn feasibility(&self) -> FeasibilityReport {
        check_feasibility(self)
    }
}

/// Free-function form of [`InflationParams::derive`].
pub fn derive_params(alpha1: f64, alpha2: f64, epsilon: f64, r: u32, theta1: Option<f64>) -> Result<InflationParams> {
    InflationParams::derive(alpha1, alpha2, epsilon, r, theta1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn desk_example() {
        let p = derive_params(1.0, 1.0, 0.1, 16, Some(1.0)).unwrap();
        assert_relative_eq!(p.beta1, 0.4, epsilon = 1e-15);
        assert_eq!(p.theta2, 1.0);
        assert_relative_eq!(p.zeta_exp, 0.3, epsilon = 1e-15);
        assert_relative_eq!(p.gamma, 0.5, epsilon = 1e-15);
        assert_eq!(p.k_base, 3);
        assert_relative_eq!(p.t_final, 0.25, epsilon = 1e-15);
        assert_relative_eq!(p.delta, 16f64.powf(-0.4), epsilon = 1e-15);
    }

    #[test]
    fn theta_defaults() {
        let p = derive_params(1.0, 1.0, 0.1, 4, None).unwrap();
        assert_eq!((p.theta1, p.theta2), (1.0, 1.0));
        let p = derive_params(1.2, 1.5, 0.1, 4, None).unwrap();
        assert_relative_eq!(p.theta1, 1.8, epsilon = 1e-14);
        assert_relative_eq!(p.theta1 + p.theta2, 3.0, epsilon = 1e-14);
    }

    #[test]
    fn theta_three_is_rejected() {
        match derive_params(1.0, 1.0, 0.1, 8, Some(3.0)) {
            Err(Error::Infeasible { constraint, .. }) => assert_eq!(constraint, "theta_window"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ladder_geometry() {
        let p = derive_params(1.0, 1.0, 0.1, 2, Some(1.0)).unwrap().with_k_base(4).unwrap();
        assert_eq!(p.k(1), Wavevector::new(4, 0, 0));
        assert_eq!(p.k(2), Wavevector::new(8, 0, 0));
        assert_eq!(p.k_prime(2), Wavevector::new(8, 0, 1));
    }

    #[test]
    fn huge_ladders_are_rejected() {
        assert!(derive_params(1.0, 1.0, 0.1, 64, None).is_ok());
        assert!(matches!(derive_params(1.0, 1.0, 0.1, 400, None), Err(Error::Domain(_))));
    }

    #[test]
    fn domain_errors() {
        assert!(derive_params(0.9, 1.0, 0.1, 4, None).is_err());
        assert!(derive_params(1.0, 1.0, 0.2, 4, None).is_err());
        assert!(derive_params(1.0, 1.0, 0.1, 0, None).is_err());
    }
}
