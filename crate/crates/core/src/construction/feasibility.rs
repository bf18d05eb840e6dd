use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::params::InflationParams;

/// One inequality of the construction with its evaluated slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityEntry {
    pub family: String,
    pub name: String,
    pub expression: String,
    /// Signed slack; the sign convention of each entry makes `pass` follow
    /// from `margin > 0` (strict) or `margin >= 0`.
    pub margin: f64,
    pub pass: bool,
    /// Entries that hold only asymptotically in `r` are reported but do not
    /// decide `overall`.
    pub gating: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub entries: Vec<FeasibilityEntry>,
    pub overall: bool,
}

impl FeasibilityReport {
    pub fn first_failure(&self) -> Option<&FeasibilityEntry> {
        self.entries.iter().find(|e| e.gating && !e.pass)
    }

    pub fn failing_families(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for e in self.entries.iter().filter(|e| e.gating && !e.pass) {
            if !out.contains(&e.family) {
                out.push(e.family.clone());
            }
        }
        out
    }

    pub fn family_passes(&self, family: &str) -> bool {
        self.entries.iter().filter(|e| e.family == family).all(|e| e.pass)
    }

    pub fn entry(&self, name: &str) -> Option<&FeasibilityEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn q(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(|| {
        // non-finite inputs never satisfy anything; map to a huge negative
        -BigRational::from_integer(BigInt::from(10).pow(400))
    })
}

fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn f(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

struct Builder {
    entries: Vec<FeasibilityEntry>,
}

impl Builder {
    fn exact(&mut self, family: &str, name: &str, expression: &str, margin: BigRational, strict: bool) {
        let pass = if strict { margin.is_positive() } else { !margin.is_negative() };
        self.entries.push(FeasibilityEntry {
            family: family.into(),
            name: name.into(),
            expression: expression.into(),
            margin: f(&margin),
            pass,
            gating: true,
        });
    }

    fn advisory(&mut self, family: &str, name: &str, expression: &str, margin: f64, strict: bool) {
        let pass = if strict { margin > 0.0 } else { margin >= 0.0 };
        self.entries.push(FeasibilityEntry {
            family: family.into(),
            name: name.into(),
            expression: expression.into(),
            margin,
            pass,
            gating: false,
        });
    }
}

/// `1/d`, or a sentinel that fails every comparison when `d <= 0`.
fn safe_div(n: &BigRational, d: &BigRational) -> Option<BigRational> {
    if d.is_positive() {
        Some(n / d)
    } else {
        None
    }
}

/// Evaluates every constraint of the construction. Linear constraints use
/// exact rational arithmetic on the binary values of the parameters; the
/// ones involving powers of `r` use `f64` and are advisory.
pub fn check_feasibility(p: &InflationParams) -> FeasibilityReport {
    let one = BigRational::one();
    let two = qi(2);
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    let (a1, a2) = (q(p.alpha1), q(p.alpha2));
    let (b1, b2) = (q(p.beta1), q(p.beta2));
    let (th1, th2) = (q(p.theta1), q(p.theta2));
    let (g, z, eps) = (q(p.gamma), q(p.zeta_exp), q(p.epsilon));
    let gap = &one - &b1 - &b2;
    let mut b = Builder { entries: Vec::new() };

    b.exact("domain", "alpha1_at_least_one", "alpha1 >= 1", &a1 - &one, false);
    b.exact("domain", "alpha2_at_least_one", "alpha2 >= 1", &a2 - &one, false);
    b.exact("domain", "r_positive", "r >= 1", qi(p.r as i64) - &one, false);
    b.exact("domain", "k_base_positive", "K >= 1", qi(p.k_base.min(i64::MAX as i128) as i64) - &one, false);
    let eps_margin = std::cmp::min(eps.clone(), BigRational::new(BigInt::from(1), BigInt::from(6)) - &eps);
    b.exact("domain", "epsilon_range", "0 < epsilon < 1/6", eps_margin, true);

    let beta_margin = |x: &BigRational| std::cmp::min(x - &third, &half - x);
    b.exact("beta_range", "beta1_range", "1/3 < beta1 < 1/2", beta_margin(&b1), true);
    b.exact("beta_range", "beta2_range", "1/3 < beta2 < 1/2", beta_margin(&b2), true);

    // the sum is checked to 1e-14 since theta2 = 2 alpha2 - theta1 is rounded
    let sum_dev = (&th1 + &th2 - &two * &a2).abs();
    let tol = q(1e-14);
    b.exact("theta_window", "theta_sum", "|theta1 + theta2 - 2 alpha2| <= 1e-14", &tol - &sum_dev, false);
    b.exact("theta_window", "theta1_lower", "theta1 >= 1", &th1 - &one, false);
    match safe_div(&a2, &a1) {
        Some(r) => b.exact(
            "theta_window",
            "theta1_upper",
            "theta1 <= 4 alpha2 - alpha2/alpha1 - 1",
            qi(4) * &a2 - r - &one - &th1,
            false,
        ),
        None => b.advisory("theta_window", "theta1_upper", "alpha1 must be positive", f64::NEG_INFINITY, false),
    }
    b.exact("theta_window", "theta2_lower", "theta2 >= 1", &th2 - &one, false);
    match safe_div(&a1, &a2) {
        Some(r) => b.exact(
            "theta_window",
            "theta2_upper",
            "theta2 <= 4 alpha1 - alpha1/alpha2 - 1",
            qi(4) * &a1 - r - &one - &th2,
            false,
        ),
        None => b.advisory("theta_window", "theta2_upper", "alpha2 must be positive", f64::NEG_INFINITY, false),
    }

    // 1 - 1/(2 alpha)
    let damp = |a: &BigRational| -> Option<BigRational> {
        let d = &two * a;
        if d.is_positive() {
            Some(&one - one.clone() / d)
        } else {
            None
        }
    };
    let (d1, d2) = (damp(&a1), damp(&a2));
    for (name, d, expr) in [
        ("gamma_floor_alpha1", &d1, "gamma > (1 - beta1 - beta2)/(1 - 1/(2 alpha1))"),
        ("gamma_floor_alpha2", &d2, "gamma > (1 - beta1 - beta2)/(1 - 1/(2 alpha2))"),
    ] {
        match d.as_ref().and_then(|d| safe_div(&gap, d)) {
            Some(floor) => b.exact("gamma_floor", name, expr, &g - floor, true),
            None => b.advisory("gamma_floor", name, expr, f64::NEG_INFINITY, true),
        }
    }

    b.exact("zeta_gamma_window", "zeta_positive", "zeta > 0", z.clone(), true);
    match safe_div(&(&one - &b1), &th2) {
        Some(up) => b.exact("zeta_gamma_window", "zeta_upper", "zeta < (1 - beta1)/theta2", up - &z, true),
        None => b.advisory("zeta_gamma_window", "zeta_upper", "theta2 must be positive", f64::NEG_INFINITY, true),
    }
    b.exact("zeta_gamma_window", "gamma_upper", "gamma < 2 alpha2 zeta", &two * &a2 * &z - &g, true);
    let time_exp = d1
        .as_ref()
        .map(|d| d - &th2 / (&two * &a1))
        .unwrap_or_else(|| qi(-1));
    b.exact(
        "zeta_gamma_window",
        "time_exponent",
        "1 - 1/(2 alpha1) - theta2/(2 alpha1) >= 0",
        time_exp.clone(),
        false,
    );

    let pos = |x: &BigRational| x.is_positive();
    if pos(&a1) && pos(&a2) {
        b.exact("beta_integrability", "theta2_over_alpha1", "theta2/(2 alpha1) < 1", &one - &th2 / (&two * &a1), true);
        b.exact("beta_integrability", "theta1_over_alpha2", "theta1/(2 alpha2) < 1", &one - &th1 / (&two * &a2), true);
        b.exact("beta_integrability", "theta2_over_alpha2", "theta2/(2 alpha2) < 1", &one - &th2 / (&two * &a2), true);
    }

    if let (Some(d1), Some(d2)) = (&d1, &d2) {
        let inv1 = one.clone() / &a1;
        let inv_half = |a: &BigRational| one.clone() / (&two * a);
        let exps = [
            ("amplitude_frequency", "beta1 - 1 + zeta theta2 < 0", &b1 - &one + &z * &th2),
            ("magnetic_correction", "-beta2 - gamma (1 - 1/(2 alpha1) - theta2/(2 alpha1)) < 0", -&b2 - &g * &time_exp),
            ("velocity_correction", "1 - beta1 - beta2 - gamma (1 - 1/(2 alpha1)) < 0", &gap - &g * d1),
            ("linear_alpha2", "1 - beta1 - beta2 - gamma (1 - 1/(2 alpha2)) < 0", &gap - &g * d2),
            ("quadratic_alpha1", "2 (1 - beta1 - beta2) - gamma (2 - 1/alpha1) < 0", &two * &gap - &g * (&two - inv1)),
            (
                "quadratic_mixed",
                "2 (1 - beta1 - beta2) - gamma (2 - 1/(2 alpha1) - 1/(2 alpha2)) < 0",
                &two * &gap - &g * (&two - inv_half(&a1) - inv_half(&a2)),
            ),
        ];
        for (name, expr, e) in exps {
            b.exact("smallness_exponents", name, expr, -e, true);
        }
    }

    // Concrete desk-scale checks.
    let r = p.r as f64;
    let k1 = p.k_base as f64;
    b.advisory(
        "b10_window",
        "b10_window",
        "|k_1|^(-2 alpha2) < T",
        p.t_final - k1.powf(-2.0 * p.alpha2),
        true,
    );
    let te = 1.0 - 1.0 / (2.0 * p.alpha1) - p.theta2 / (2.0 * p.alpha1);
    let a_value = r.powf(p.beta1 - 1.0) * k1.powf(p.theta2)
        + r.powf(-p.beta2) * p.t_final.powf(te)
        + r.powf(1.0 - p.beta1 - p.beta2) * p.t_final.powf(1.0 - 1.0 / (2.0 * p.alpha1));
    b.advisory("smallness_value", "smallness_value", "A <= 1/2 at the concrete (r, K, T)", 0.5 - a_value, false);
    if p.r > 1 && p.k_base > 1 {
        let zeta_eff = k1.ln() / r.ln();
        b.advisory(
            "k_rounding",
            "k_rounding",
            "ln K / ln r < (1 - beta1)/theta2 after rounding K up",
            (1.0 - p.beta1) / p.theta2 - zeta_eff,
            true,
        );
    }

    let overall = b.entries.iter().filter(|e| e.gating).all(|e| e.pass);
    FeasibilityReport { entries: b.entries, overall }
}
