use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    analyze_real, check_divergence_free, derivative, norm_sq, project_in_place, render_real, Grid,
    SpectralVectorField,
};

/// Velocity and magnetic field at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub t: f64,
    pub u: SpectralVectorField,
    pub b: SpectralVectorField,
}

/// Nonlinear tendencies and the padded-grid maxima seen while computing them.
#[derive(Debug, Clone)]
pub struct Tendency {
    pub du: SpectralVectorField,
    pub db: SpectralVectorField,
    pub sup_u: f64,
    pub sup_b: f64,
}

/// Linear and nonlinear parts of the system on one grid.
#[derive(Debug, Clone)]
pub struct Dynamics {
    grid: Grid,
    alpha1: f64,
    alpha2: f64,
    rate_u: Vec<f64>,
    rate_b: Vec<f64>,
    nonlinear: bool,
}

/// Per-mode ETD2RK weights for one step size.
#[derive(Debug, Clone)]
struct Weights {
    dt: f64,
    e_u: Vec<f64>,
    p1_u: Vec<f64>,
    p2_u: Vec<f64>,
    e_b: Vec<f64>,
    p1_b: Vec<f64>,
    p2_b: Vec<f64>,
}

/// `(e^z - 1)/z`.
fn phi1(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        z.exp_m1() / z
    }
}

/// `(e^z - 1 - z)/z²`, by its series near zero.
fn phi2(z: f64) -> f64 {
    if z.abs() < 0.1 {
        let mut term = 0.5;
        let mut acc = 0.5;
        for k in 3..14 {
            term *= z / k as f64;
            acc += term;
        }
        acc
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}

fn weights_for(rates: &[f64], dt: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut e = Vec::with_capacity(rates.len());
    let mut p1 = Vec::with_capacity(rates.len());
    let mut p2 = Vec::with_capacity(rates.len());
    for &lam in rates {
        let z = -lam * dt;
        e.push(z.exp());
        p1.push(dt * phi1(z));
        p2.push(dt * phi2(z));
    }
    (e, p1, p2)
}

impl Dynamics {
    pub fn new(grid: Grid, alpha1: f64, alpha2: f64) -> Result<Self> {
        if !(alpha1 > 0.0 && alpha2 > 0.0) {
            return Err(Error::Domain(format!("dissipation powers must be positive, got ({alpha1}, {alpha2})")));
        }
        let mut rate_u = vec![0.0; grid.len()];
        let mut rate_b = vec![0.0; grid.len()];
        for (idx, m) in grid.modes() {
            let k2 = norm_sq(m) as f64;
            rate_u[idx] = k2.powf(alpha1);
            rate_b[idx] = k2.powf(alpha2);
        }
        Ok(Self { grid, alpha1, alpha2, rate_u, rate_b, nonlinear: true })
    }

    /// Drops the quadratic terms, leaving the two fractional heat flows.
    pub fn linear_only(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn alphas(&self) -> (f64, f64) {
        (self.alpha1, self.alpha2)
    }

    pub fn is_nonlinear(&self) -> bool {
        self.nonlinear
    }

    /// `du = -P[(u·∇)u - (b·∇)b]`, `db = -P[(u·∇)b - (b·∇)u]`, both without
    /// mean, after checking that `u` and `b` are solenoidal.
    pub fn rhs_nonlinear(&self, u: &SpectralVectorField, b: &SpectralVectorField) -> Result<Tendency> {
        if u.grid() != &self.grid || b.grid() != &self.grid {
            return Err(Error::Grid("fields do not live on the solver grid".into()));
        }
        check_divergence_free(u, "velocity")?;
        check_divergence_free(b, "magnetic field")?;
        Ok(self.tendency(u, b))
    }

    pub(crate) fn tendency(&self, u: &SpectralVectorField, b: &SpectralVectorField) -> Tendency {
        let g = self.grid;
        let pd = g.padded_dims();
        if !self.nonlinear {
            let su = crate::spectral::sup_norm(u);
            let sb = crate::spectral::sup_norm(b);
            return Tendency {
                du: SpectralVectorField::zeros(g),
                db: SpectralVectorField::zeros(g),
                sup_u: su,
                sup_b: sb,
            };
        }
        let axes: Vec<usize> = (0..3).filter(|&j| g.cutoff(j) > 0).collect();
        let grads: Vec<([Vec<Complex64>; 3], [Vec<Complex64>; 3])> =
            axes.iter().map(|&j| (derivative(u, j), derivative(b, j))).collect();
        let mut inputs: Vec<&[Complex64]> = vec![
            u.component(0),
            u.component(1),
            u.component(2),
            b.component(0),
            b.component(1),
            b.component(2),
        ];
        for (du, db) in &grads {
            for a in 0..3 {
                inputs.push(&du[a]);
            }
            for a in 0..3 {
                inputs.push(&db[a]);
            }
        }
        let phys = render_real(&g, &inputs, pd);
        let n: usize = pd.iter().product();
        let (uu, bb) = (&phys[0..3], &phys[3..6]);
        let mut adv = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        let mut ind = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for (q, &j) in axes.iter().enumerate() {
            let du = &phys[6 + 6 * q..9 + 6 * q];
            let db = &phys[9 + 6 * q..12 + 6 * q];
            for a in 0..3 {
                for p in 0..n {
                    let (uj, bj) = (uu[j][p], bb[j][p]);
                    adv[a][p] += uj * du[a][p] - bj * db[a][p];
                    ind[a][p] += uj * db[a][p] - bj * du[a][p];
                }
            }
        }
        let sup = |f: &[Vec<f64>]| {
            (0..n)
                .map(|p| f[0][p] * f[0][p] + f[1][p] * f[1][p] + f[2][p] * f[2][p])
                .fold(0.0, f64::max)
                .sqrt()
        };
        let (sup_u, sup_b) = (sup(uu), sup(bb));
        let mut c = analyze_real(&g, &[&adv[0], &adv[1], &adv[2], &ind[0], &ind[1], &ind[2]], pd).into_iter();
        let mut du = SpectralVectorField::from_coeffs_unchecked(g, [c.next().unwrap(), c.next().unwrap(), c.next().unwrap()]);
        let mut db = SpectralVectorField::from_coeffs_unchecked(g, [c.next().unwrap(), c.next().unwrap(), c.next().unwrap()]);
        for f in [&mut du, &mut db] {
            project_in_place(f);
            f.clear_mean();
            for a in 0..3 {
                f.component_mut(a).iter_mut().for_each(|v| *v = -*v);
            }
        }
        Tendency { du, db, sup_u, sup_b }
    }
}

/// Exponential time differencing, second-order Runge–Kutta (Cox–Matthews):
/// `a = e^{L dt} x + dt φ₁ N(x)`, `x⁺ = a + dt φ₂ (N(a) - N(x))`.
#[derive(Debug, Clone)]
pub struct Stepper {
    dynamics: Dynamics,
    weights: Option<Weights>,
}

fn combine(
    x: &SpectralVectorField,
    e: &[f64],
    w: &[f64],
    n: &SpectralVectorField,
) -> SpectralVectorField {
    let mut out = x.clone();
    for a in 0..3 {
        let (o, nc) = (out.component_mut(a), n.component(a));
        for i in 0..o.len() {
            o[i] = o[i] * e[i] + nc[i] * w[i];
        }
    }
    out
}

fn correct(a: &SpectralVectorField, w: &[f64], n1: &SpectralVectorField, n0: &SpectralVectorField) -> SpectralVectorField {
    let mut out = a.clone();
    for c in 0..3 {
        let (o, x1, x0) = (out.component_mut(c), n1.component(c), n0.component(c));
        for i in 0..o.len() {
            o[i] += (x1[i] - x0[i]) * w[i];
        }
    }
    out
}

impl Stepper {
    pub fn new(dynamics: Dynamics) -> Self {
        Self { dynamics, weights: None }
    }

    pub fn dynamics(&self) -> &Dynamics {
        &self.dynamics
    }

    fn weights(&mut self, dt: f64) -> &Weights {
        if self.weights.as_ref().map(|w| w.dt) != Some(dt) {
            let (e_u, p1_u, p2_u) = weights_for(&self.dynamics.rate_u, dt);
            let (e_b, p1_b, p2_b) = weights_for(&self.dynamics.rate_b, dt);
            self.weights = Some(Weights { dt, e_u, p1_u, p2_u, e_b, p1_b, p2_b });
        }
        self.weights.as_ref().unwrap()
    }

    /// One step given the tendency `n0` already evaluated at `state`.
    pub fn advance(&mut self, state: &SolverState, n0: &Tendency, dt: f64) -> Result<SolverState> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Domain(format!("time step must be positive, got {dt}")));
        }
        let w = self.weights(dt).clone();
        let au = combine(&state.u, &w.e_u, &w.p1_u, &n0.du);
        let ab = combine(&state.b, &w.e_b, &w.p1_b, &n0.db);
        if !self.dynamics.nonlinear {
            return Ok(SolverState { t: state.t + dt, u: au, b: ab });
        }
        let n1 = self.dynamics.tendency(&au, &ab);
        let u = correct(&au, &w.p2_u, &n1.du, &n0.du);
        let b = correct(&ab, &w.p2_b, &n1.db, &n0.db);
        Ok(SolverState { t: state.t + dt, u, b })
    }

    /// One full step from `state`.
    pub fn step(&mut self, state: &SolverState, dt: f64) -> Result<SolverState> {
        let n0 = self.dynamics.tendency(&state.u, &state.b);
        self.advance(state, &n0, dt)
    }
}

/// Step-size rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DtPolicy {
    /// `dt = courant / (k_act (‖u‖∞ + ‖b‖∞))`, re-evaluated every
    /// `recheck_every` steps.
    Cfl { courant: f64, recheck_every: usize },
    /// `n_steps` equal steps over the run (split at sample times).
    FixedSteps(usize),
}

impl Default for DtPolicy {
    fn default() -> Self {
        DtPolicy::Cfl { courant: 0.5, recheck_every: 16 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_functions_are_smooth_across_the_switch() {
        for z in [-0.0999999f64, -0.1000001, 0.0999999, -1e-8] {
            let direct = (z.exp_m1() - z) / (z * z);
            if z.abs() > 1e-3 {
                assert!((phi2(z) - direct).abs() < 1e-12, "{z}");
            }
        }
        assert_eq!(phi2(0.0), 0.5);
        assert_eq!(phi1(0.0), 1.0);
        assert!((phi1(-1.0) - (1.0 - (-1f64).exp())).abs() < 1e-16);
    }
}
