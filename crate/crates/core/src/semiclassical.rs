//! Semiclassical acceleration, its integration into a phase-space path, and
//! the thawed Gaussian wavefunction it is built on.
//!
//! The acceleration is the force averaged over the thawed Gaussian density
//! `|psi_sc|^2 = exp(-(x - q_c)^2 / sigma^2) / (sqrt(pi) sigma)`, where
//! `sigma = b sqrt(m_qq^2 + m_qp^2)`. Three routes are provided: a closed
//! Hermite sum for polynomials, direct quadrature for any smooth force, and
//! a closed form for the step wall.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::{ClassicalState, PhasePoint, SystemParams};
use crate::error::{Error, Result};
use crate::potential::{hermite_real, PolynomialPotential, StepPotential};
use crate::quadrature::adaptive_simpson;

/// Half-width of the quadrature window, in units of `sigma`.
pub const QUADRATURE_WINDOW: f64 = 8.0;
pub const QUADRATURE_REL_TOL: f64 = 1e-10;
pub const QUADRATURE_MAX_DEPTH: u32 = 40;

/// Position width of the thawed Gaussian.
pub fn sigma(params: &SystemParams, m_qq: f64, m_qp: f64) -> f64 {
    params.b() * m_qq.hypot(m_qp)
}

/// Normalised density `exp(-(x - center)^2 / sigma^2) / (sqrt(pi) sigma)`.
pub fn gaussian_density(x: f64, center: f64, sigma: f64) -> f64 {
    let u = (x - center) / sigma;
    (-u * u).exp() / (PI.sqrt() * sigma)
}

/// Closed-form acceleration for a polynomial potential:
/// `-(1/mass) sum_n n alpha_n (sigma/2)^{n-1} R_{n-1}(q_c / sigma)`.
pub fn accel_hermite(pot: &PolynomialPotential, q_c: f64, sigma: f64, mass: f64) -> f64 {
    let y = q_c / sigma;
    let half = 0.5 * sigma;
    let mean_force: f64 = pot
        .coefficients()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &alpha)| {
            if alpha == 0.0 {
                0.0
            } else {
                n as f64 * alpha * half.powi(n as i32 - 1) * hermite_real(n - 1, y)
            }
        })
        .sum();
    -mean_force / mass
}

/// Acceleration by direct quadrature of `dV/dx` against the Gaussian density
/// over `q_c +- 8 sigma`.
pub fn accel_quadrature<F>(dv_dx: F, q_c: f64, sigma: f64, mass: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let half_width = QUADRATURE_WINDOW * sigma;
    let mean = adaptive_simpson(
        |x| gaussian_density(x, q_c, sigma) * dv_dx(x),
        q_c - half_width,
        q_c + half_width,
        QUADRATURE_REL_TOL,
        QUADRATURE_MAX_DEPTH,
    )?;
    Ok(-mean / mass)
}

/// Acceleration for the step wall: `-(V_0 / mass) |psi_sc(x_w)|^2`.
pub fn accel_step(pot: &StepPotential, q_c: f64, sigma: f64, mass: f64) -> f64 {
    -pot.height / mass * gaussian_density(pot.wall, q_c, sigma)
}

/// Classical acceleration plus the leading `sigma^2` correction,
/// `a_c - sigma^2 V'''(q_c) / (4 mass)`. Diagnostic only.
pub fn accel_series(pot: &PolynomialPotential, q_c: f64, sigma: f64, mass: f64) -> f64 {
    let a_c = -pot.gradient(q_c) / mass;
    a_c - sigma * sigma / (4.0 * mass) * pot.derivative(q_c, 3)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiclassicalPath {
    pub times: Vec<f64>,
    pub a_sc: Vec<f64>,
    pub p_sc: Vec<f64>,
    pub q_sc: Vec<f64>,
}

/// Integrates a uniformly sampled acceleration twice by the trapezoid rule.
pub fn integrate_path(a_sc: &[f64], dt: f64, initial: PhasePoint, mass: f64) -> Result<SemiclassicalPath> {
    if a_sc.len() < 2 {
        return Err(Error::invalid("a_sc", "need at least two samples"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("dt", "must be finite and > 0"));
    }
    let n = a_sc.len();
    let mut p_sc = Vec::with_capacity(n);
    let mut q_sc = Vec::with_capacity(n);
    p_sc.push(initial.p);
    q_sc.push(initial.q);
    for i in 1..n {
        let p = p_sc[i - 1] + mass * 0.5 * dt * (a_sc[i - 1] + a_sc[i]);
        p_sc.push(p);
        let q = q_sc[i - 1] + 0.5 * dt * (p_sc[i - 1] + p) / mass;
        q_sc.push(q);
    }
    Ok(SemiclassicalPath {
        times: (0..n).map(|i| i as f64 * dt).collect(),
        a_sc: a_sc.to_vec(),
        p_sc,
        q_sc,
    })
}

/// Snapshot of Heller's thawed Gaussian at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HellerState {
    /// `(m_pp - i m_pq) / (m_qq + i m_qp)`
    pub zeta: Complex64,
    /// `pi^{-1/4} b^{-1/2} (m_qq + i m_qp)^{-1/2}` on the tracked branch.
    pub prefactor: Complex64,
    pub q_c: f64,
    pub p_c: f64,
    pub action: f64,
    b: f64,
    hbar: f64,
    /// `q_0 p_0 / 2`
    initial_phase: f64,
}

impl HellerState {
    pub fn amplitude(&self, x: f64) -> Complex64 {
        let dx = x - self.q_c;
        let exponent = -self.zeta * dx * dx / (2.0 * self.b * self.b)
            + Complex64::i() * ((self.action + self.p_c * dx + self.initial_phase) / self.hbar);
        self.prefactor * exponent.exp()
    }

    pub fn density(&self, x: f64) -> f64 {
        self.amplitude(x).norm_sqr()
    }
}

/// Builds [`HellerState`]s along a trajectory, keeping the complex square
/// root in the prefactor continuous in time.
#[derive(Debug, Clone)]
pub struct ThawedGaussian {
    params: SystemParams,
    initial: PhasePoint,
    last_root: Option<Complex64>,
}

impl ThawedGaussian {
    pub fn new(params: SystemParams, initial: PhasePoint) -> Self {
        Self {
            params,
            initial,
            last_root: None,
        }
    }

    /// States must be fed in time order for the branch tracking to hold.
    pub fn state(&mut self, state: &ClassicalState) -> Result<HellerState> {
        let m = &state.tangent;
        let denom = Complex64::new(m.qq, m.qp);
        let zeta = Complex64::new(m.pp, -m.pq) / denom;
        if !(zeta.re > 0.0) {
            return Err(Error::NonNormalizable(zeta.re));
        }
        let mut root = denom.sqrt();
        if let Some(prev) = self.last_root {
            if (root - prev).norm() > (root + prev).norm() {
                root = -root;
            }
        }
        self.last_root = Some(root);
        let b = self.params.b();
        let prefactor = Complex64::new(PI.powf(-0.25) / b.sqrt(), 0.0) / root;
        Ok(HellerState {
            zeta,
            prefactor,
            q_c: state.phase.q,
            p_c: state.phase.p,
            action: state.action,
            b,
            hbar: self.params.hbar(),
            initial_phase: 0.5 * self.initial.q * self.initial.p,
        })
    }
}

/// One-shot evaluation of `psi_sc(x, t)` on the principal branch.
pub fn heller_wavefunction(
    x: f64,
    state: &ClassicalState,
    params: &SystemParams,
    initial: PhasePoint,
) -> Result<Complex64> {
    Ok(ThawedGaussian::new(*params, initial).state(state)?.amplitude(x))
}
