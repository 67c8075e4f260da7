//! Hamilton's equations, the tangent (stability) matrix in `(dq/b, dp/c)`
//! coordinates, and the classical action.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{PolynomialPotential, StepPotential};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }
}

/// Linearised flow map acting on `(dq/b, dp/c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentMatrix {
    pub qq: f64,
    pub qp: f64,
    pub pq: f64,
    pub pp: f64,
}

impl TangentMatrix {
    pub const IDENTITY: TangentMatrix = TangentMatrix {
        qq: 1.0,
        qp: 0.0,
        pq: 0.0,
        pp: 1.0,
    };

    pub fn determinant(&self) -> f64 {
        self.qq * self.pp - self.qp * self.pq
    }
}

impl Default for TangentMatrix {
    fn default() -> Self {
        Self::IDENTITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub t: f64,
    pub phase: PhasePoint,
    pub tangent: TangentMatrix,
    pub action: f64,
}

impl ClassicalState {
    pub fn initial(phase: PhasePoint) -> Self {
        Self {
            t: 0.0,
            phase,
            tangent: TangentMatrix::IDENTITY,
            action: 0.0,
        }
    }
}

/// Mass, Planck constant and packet width. The momentum scale `c` is always
/// derived as `hbar / b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    mass: f64,
    hbar: f64,
    b: f64,
}

impl SystemParams {
    pub fn new(mass: f64, hbar: f64, b: f64) -> Result<Self> {
        for (field, v) in [("mass", mass), ("hbar", hbar), ("b", b)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(field, format!("must be finite and > 0, got {v}")));
            }
        }
        Ok(Self { mass, hbar, b })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.hbar / self.b
    }

    /// `hbar / (mass b^2)`, the free-flight growth rate of `m_qp`.
    pub fn spreading_rate(&self) -> f64 {
        self.hbar / (self.mass * self.b * self.b)
    }
}

#[derive(Clone, Copy)]
struct Deriv([f64; 7]);

impl Deriv {
    fn axpy(self, h: f64, k: Deriv) -> Deriv {
        let mut out = self.0;
        for (o, d) in out.iter_mut().zip(k.0) {
            *o += h * d;
        }
        Deriv(out)
    }
}

fn rhs(y: &Deriv, pot: &PolynomialPotential, params: &SystemParams) -> Deriv {
    let [q, p, qq, qp, pq, pp, _] = y.0;
    let mass = params.mass;
    let upper = params.spreading_rate();
    let lower = -(params.b / params.c()) * pot.derivative(q, 2);
    Deriv([
        p / mass,
        -pot.gradient(q),
        upper * pq,
        upper * pp,
        lower * qq,
        lower * qp,
        p * p / (2.0 * mass) - pot.value(q),
    ])
}

fn pack(s: &ClassicalState) -> Deriv {
    Deriv([
        s.phase.q,
        s.phase.p,
        s.tangent.qq,
        s.tangent.qp,
        s.tangent.pq,
        s.tangent.pp,
        s.action,
    ])
}

/// One classical RK4 step of the coupled trajectory / tangent / action system.
pub fn rk4_step(
    state: &ClassicalState,
    pot: &PolynomialPotential,
    params: &SystemParams,
    dt: f64,
) -> Result<ClassicalState> {
    let y = pack(state);
    let k1 = rhs(&y, pot, params);
    let k2 = rhs(&y.axpy(0.5 * dt, k1), pot, params);
    let k3 = rhs(&y.axpy(0.5 * dt, k2), pot, params);
    let k4 = rhs(&y.axpy(dt, k3), pot, params);
    let mut out = y.0;
    for (i, v) in out.iter_mut().enumerate() {
        *v += dt / 6.0 * (k1.0[i] + 2.0 * k2.0[i] + 2.0 * k3.0[i] + k4.0[i]);
    }
    let t = state.t + dt;
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Diverged { t });
    }
    let [q, p, qq, qp, pq, pp, action] = out;
    Ok(ClassicalState {
        t,
        phase: PhasePoint { q, p },
        tangent: TangentMatrix { qq, qp, pq, pp },
        action,
    })
}

/// Number of steps of size `dt` covering `[0, t_final]`; `dt` must divide it.
pub(crate) fn step_count(t_final: f64, dt: f64) -> Result<usize> {
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(Error::invalid("t_final", "must be finite and > 0"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("dt", "must be finite and > 0"));
    }
    let n = (t_final / dt).round();
    if n < 1.0 || (n * dt - t_final).abs() > 1e-9 * t_final {
        return Err(Error::invalid(
            "dt",
            format!("{dt} does not divide t_final = {t_final}"),
        ));
    }
    Ok(n as usize)
}

/// States at `t = 0, dt, ..., t_final`, starting from the identity tangent
/// matrix and zero action.
pub fn integrate(
    initial: PhasePoint,
    pot: &PolynomialPotential,
    params: &SystemParams,
    t_final: f64,
    dt: f64,
) -> Result<Vec<ClassicalState>> {
    let n = step_count(t_final, dt)?;
    let mut out = Vec::with_capacity(n + 1);
    let mut state = ClassicalState::initial(initial);
    out.push(state);
    for i in 1..=n {
        state = rk4_step(&state, pot, params, dt)?;
        // keep the time axis free of accumulated round-off
        state.t = i as f64 * dt;
        out.push(state);
    }
    Ok(out)
}

/// Analytic bounce off a step wall (elastic reflection at `t_0`).
///
/// Returns the phase point and `(m_qq, m_qp)`. Only valid below the barrier
/// top; the caller is expected to have validated `p_0 < sqrt(2 mass V_0)`.
pub fn step_trajectory(
    initial: PhasePoint,
    pot: &StepPotential,
    params: &SystemParams,
    t: f64,
) -> (PhasePoint, f64, f64) {
    let mass = params.mass;
    let t0 = collision_time(initial, pot, mass);
    let (phase, m_qq) = if t <= t0 {
        (PhasePoint::new(initial.q + initial.p * t / mass, initial.p), 1.0)
    } else {
        (
            PhasePoint::new(pot.wall - initial.p * (t - t0) / mass, -initial.p),
            -1.0,
        )
    };
    (phase, m_qq, params.spreading_rate() * t * m_qq)
}

/// Time at which the classical particle reaches the wall.
pub fn collision_time(initial: PhasePoint, pot: &StepPotential, mass: f64) -> f64 {
    mass * (pot.wall - initial.q) / initial.p
}

/// Full classical state for the step, using `m_pp = m_qq`, `m_pq = 0`.
///
/// The action is left at zero: the step scenario only needs densities.
pub fn step_state(initial: PhasePoint, pot: &StepPotential, params: &SystemParams, t: f64) -> ClassicalState {
    let (phase, qq, qp) = step_trajectory(initial, pot, params, t);
    ClassicalState {
        t,
        phase,
        tangent: TangentMatrix {
            qq,
            qp,
            pq: 0.0,
            pp: qq,
        },
        action: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn params(hbar: f64) -> SystemParams {
        SystemParams::new(1.0, hbar, 0.1).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(SystemParams::new(0.0, 1.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, -1.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, f64::NAN).is_err());
        let p = SystemParams::new(2.0, 0.05, 0.1).unwrap();
        assert_abs_diff_eq!(p.b() * p.c(), 0.05, epsilon = 1e-16);
    }

    #[test]
    fn free_particle_single_step() {
        let s0 = ClassicalState::initial(PhasePoint::new(0.0, 1.0));
        let s = rk4_step(&s0, &PolynomialPotential::zero(), &params(0.01), 0.1).unwrap();
        assert_abs_diff_eq!(s.phase.q, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(s.phase.p, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.tangent.qq, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.tangent.qp, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(s.action, 0.05, epsilon = 1e-15);
    }

    #[test]
    fn determinant_after_one_step() {
        let pot = PolynomialPotential::new(vec![0.3, -1.0, 0.7, 0.5, 0.25]);
        let s0 = ClassicalState::initial(PhasePoint::new(0.4, -0.8));
        let s = rk4_step(&s0, &pot, &params(0.02), 1e-3).unwrap();
        assert_abs_diff_eq!(s.tangent.determinant(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn harmonic_period_and_tangent() {
        let p = params(0.01);
        let pot = PolynomialPotential::harmonic(1.0, 1.0);
        let dt = 2.0 * PI / 6000.0;
        let traj = integrate(PhasePoint::new(0.5, 1.0), &pot, &p, 2.0 * PI, dt).unwrap();
        let last = traj.last().unwrap();
        assert_abs_diff_eq!(last.phase.q, 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(last.phase.p, 1.0, epsilon = 1e-6);
        let ratio = p.hbar() / (p.mass() * p.b() * p.b());
        for s in traj.iter().step_by(500) {
            assert_abs_diff_eq!(s.tangent.qq, s.t.cos(), epsilon = 1e-9);
            assert_abs_diff_eq!(s.tangent.qp, ratio * s.t.sin(), epsilon = 1e-9);
            assert_abs_diff_eq!(s.tangent.determinant(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn linear_potential_is_exact() {
        let pot = PolynomialPotential::new(vec![0.0, 0.7]);
        let traj = integrate(PhasePoint::new(0.0, 1.0), &pot, &params(0.01), 1.0, 0.01).unwrap();
        for s in &traj {
            assert_abs_diff_eq!(s.phase.p, 1.0 - 0.7 * s.t, epsilon = 1e-13);
            assert_abs_diff_eq!(s.phase.q, s.t - 0.35 * s.t * s.t, epsilon = 1e-13);
        }
    }

    #[test]
    fn cubic_short_time_series() {
        // q'' = -3 q^2 with q(0) = 0, q'(0) = 1: q = t - t^4 / 4 + ...
        let traj = integrate(
            PhasePoint::new(0.0, 1.0),
            &PolynomialPotential::cubic(1.0),
            &params(0.01),
            0.1,
            1e-3,
        )
        .unwrap();
        for s in &traj {
            let t = s.t;
            assert_abs_diff_eq!(s.phase.q, t - t.powi(4) / 4.0, epsilon = 2.0 * t.powi(7) + 1e-13);
        }
    }

    #[test]
    fn integrate_rejects_non_dividing_step() {
        assert!(integrate(
            PhasePoint::new(0.0, 1.0),
            &PolynomialPotential::zero(),
            &params(0.01),
            1.0,
            0.3
        )
        .is_err());
    }

    #[test]
    fn diverging_trajectory_is_reported() {
        let pot = PolynomialPotential::new(vec![0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0]);
        let r = integrate(PhasePoint::new(3.0, 100.0), &pot, &params(0.01), 10.0, 0.01);
        assert!(matches!(r, Err(Error::Diverged { .. })));
    }

    #[test]
    fn step_branches() {
        let wall = StepPotential::new(5.0, 1.0);
        let start = PhasePoint::new(0.0, 1.0);
        let p = SystemParams::new(1.0, 0.05, 0.1).unwrap();
        let (ph, qq, _) = step_trajectory(start, &wall, &p, 0.5);
        assert_eq!((ph.q, ph.p, qq), (0.5, 1.0, 1.0));
        let (ph, qq, _) = step_trajectory(start, &wall, &p, 1.0);
        assert_eq!((ph.q, ph.p, qq), (1.0, 1.0, 1.0));
        let (ph, qq, qp) = step_trajectory(start, &wall, &p, 1.5);
        assert_eq!((ph.q, ph.p, qq), (0.5, -1.0, -1.0));
        assert_abs_diff_eq!(qp, -7.5, epsilon = 1e-12);
        let s = step_state(start, &wall, &p, 1.5);
        assert_abs_diff_eq!(s.tangent.determinant(), 1.0, epsilon = 1e-15);
    }
}
