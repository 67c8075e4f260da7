//! Exact quantum reference: split-step Fourier propagation of the coherent
//! state on a periodic grid, plus the short-time analytic expansion.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::classical::{step_count, PhasePoint, SystemParams};
use crate::error::{Error, Result};
use crate::potential::{hermite_real, PolynomialPotential, Potential};

/// Largest `|psi|^2` tolerated on either edge sample before the run is
/// declared to have run out of domain.
///
/// A sharp step gives the exact solution algebraic momentum tails, so the
/// edge density of a step run never drops to round-off; 1e-12 is well
/// below anything the recorded moments can resolve.
pub const EDGE_DENSITY_LIMIT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::invalid("x_max", "grid needs finite x_max > x_min"));
        }
        if n_points < 2 || !n_points.is_power_of_two() {
            return Err(Error::invalid(
                "n_points",
                format!("{n_points} is not a power of two >= 2"),
            ));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.x(j))
    }

    /// Angular wavenumbers in FFT output order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points;
        let dk = 2.0 * PI / (n as f64 * self.dx());
        (0..n)
            .map(|j| if j < n / 2 { j as f64 } else { j as f64 - n as f64 } * dk)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionGrid {
    pub grid: Grid,
    pub amplitudes: Vec<Complex64>,
}

impl WavefunctionGrid {
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn edge_density(&self) -> f64 {
        let n = self.amplitudes.len();
        self.amplitudes[0].norm_sqr().max(self.amplitudes[n - 1].norm_sqr())
    }

    /// `<f(x)>` by Riemann sum.
    pub fn position_average<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.grid
            .points()
            .zip(&self.amplitudes)
            .map(|(x, a)| a.norm_sqr() * f(x))
            .sum::<f64>()
            * self.grid.dx()
    }

    /// `|psi(x)|^2` by linear interpolation between grid samples.
    pub fn density_at(&self, x: f64) -> f64 {
        let s = (x - self.grid.x_min) / self.grid.dx();
        if s < 0.0 || s > (self.grid.n_points - 1) as f64 {
            return 0.0;
        }
        let j = (s.floor() as usize).min(self.grid.n_points - 2);
        let w = s - j as f64;
        (1.0 - w) * self.amplitudes[j].norm_sqr() + w * self.amplitudes[j + 1].norm_sqr()
    }
}

/// Samples the coherent state centred on `initial` and renormalises the
/// discrete norm to one.
pub fn init_coherent(grid: Grid, initial: PhasePoint, params: &SystemParams) -> Result<WavefunctionGrid> {
    let b = params.b();
    if initial.q - 8.0 * b < grid.x_min || initial.q + 8.0 * b > grid.x_max {
        return Err(Error::invalid(
            "grid",
            format!(
                "coherent state support [{}, {}] exceeds [{}, {}]",
                initial.q - 8.0 * b,
                initial.q + 8.0 * b,
                grid.x_min,
                grid.x_max
            ),
        ));
    }
    let hbar = params.hbar();
    let amplitudes: Vec<Complex64> = grid
        .points()
        .map(|x| {
            let u = (x - initial.q) / b;
            Complex64::new(-0.5 * u * u, initial.p * (x - 0.5 * initial.q) / hbar).exp()
        })
        .collect();
    let mut psi = WavefunctionGrid { grid, amplitudes };
    let scale = 1.0 / psi.norm().sqrt();
    psi.amplitudes.iter_mut().for_each(|a| *a *= scale);
    Ok(psi)
}

/// Expectation values used by the comparison and the Ehrenfest check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Expectations {
    pub q: f64,
    pub p: f64,
    /// `<dV/dq>`; for the step this is `V_0 |psi(x_w)|^2`.
    pub dv_dq: f64,
}

/// Strang-split propagator with cached FFT plans and phase factors.
pub struct SplitStep {
    grid: Grid,
    potential: Potential,
    params: SystemParams,
    dt: f64,
    half_potential: Vec<Complex64>,
    kinetic: Vec<Complex64>,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    spectrum: Vec<Complex64>,
}

impl SplitStep {
    pub fn new(grid: Grid, potential: Potential, params: SystemParams, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("dt_qm", "must be finite and > 0"));
        }
        let hbar = params.hbar();
        let half_potential = grid
            .points()
            .map(|x| Complex64::from_polar(1.0, -potential.value(x) * dt / (2.0 * hbar)))
            .collect();
        let wavenumbers = grid.wavenumbers();
        let kinetic = wavenumbers
            .iter()
            .map(|k| Complex64::from_polar(1.0, -hbar * k * k * dt / (2.0 * params.mass())))
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.len());
        let inverse = planner.plan_fft_inverse(grid.len());
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Ok(Self {
            grid,
            potential,
            params,
            dt,
            half_potential,
            kinetic,
            wavenumbers,
            forward,
            inverse,
            scratch: vec![Complex64::default(); scratch_len],
            spectrum: vec![Complex64::default(); grid.len()],
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// `exp(-iV dt/2hbar) exp(-i hbar k^2 dt/2mu) exp(-iV dt/2hbar)`.
    pub fn step(&mut self, psi: &mut WavefunctionGrid) {
        let n = self.grid.len();
        let inv_n = 1.0 / n as f64;
        for (a, v) in psi.amplitudes.iter_mut().zip(&self.half_potential) {
            *a *= v;
        }
        self.forward
            .process_with_scratch(&mut psi.amplitudes, &mut self.scratch);
        for (a, k) in psi.amplitudes.iter_mut().zip(&self.kinetic) {
            *a *= k * inv_n;
        }
        self.inverse
            .process_with_scratch(&mut psi.amplitudes, &mut self.scratch);
        for (a, v) in psi.amplitudes.iter_mut().zip(&self.half_potential) {
            *a *= v;
        }
    }

    /// `hat p psi` via the spectral derivative.
    pub fn apply_momentum(&mut self, psi: &WavefunctionGrid) -> Vec<Complex64> {
        let hbar = self.params.hbar();
        let inv_n = 1.0 / self.grid.len() as f64;
        let mut out = psi.amplitudes.clone();
        self.forward.process_with_scratch(&mut out, &mut self.scratch);
        for (a, k) in out.iter_mut().zip(&self.wavenumbers) {
            *a *= hbar * k * inv_n;
        }
        self.inverse.process_with_scratch(&mut out, &mut self.scratch);
        out
    }

    pub fn expectations(&mut self, psi: &WavefunctionGrid) -> Expectations {
        let norm = psi.norm();
        let q = psi.position_average(|x| x) / norm;

        self.spectrum.copy_from_slice(&psi.amplitudes);
        self.forward.process_with_scratch(&mut self.spectrum, &mut self.scratch);
        let (weighted, total) = self
            .spectrum
            .iter()
            .zip(&self.wavenumbers)
            .fold((0.0, 0.0), |(w, t), (a, k)| (w + k * a.norm_sqr(), t + a.norm_sqr()));
        let p = self.params.hbar() * weighted / total;

        let dv_dq = match self.potential.clone() {
            Potential::Polynomial(pot) => psi.position_average(|x| pot.gradient(x)) / norm,
            // sampled step: the force the grid actually feels, (i/hbar)<[p, V]>
            Potential::Step(s) => {
                let p_psi = self.apply_momentum(psi);
                let im: f64 = psi
                    .amplitudes
                    .iter()
                    .zip(&p_psi)
                    .enumerate()
                    .filter(|(j, _)| self.grid.x(*j) > s.wall)
                    .map(|(_, (a, pa))| (a.conj() * pa).im)
                    .sum();
                2.0 * s.height * im * self.grid.dx() / (self.params.hbar() * norm)
            }
        };
        Expectations { q, p, dv_dq }
    }

    /// `<{p, f(q)}> = 2 Re <psi| f(q) p |psi>`.
    pub fn anticommutator(&mut self, psi: &WavefunctionGrid, f: impl Fn(f64) -> f64) -> f64 {
        let p_psi = self.apply_momentum(psi);
        let sum: f64 = self
            .grid
            .points()
            .zip(psi.amplitudes.iter().zip(&p_psi))
            .map(|(x, (a, pa))| f(x) * (a.conj() * pa).re)
            .sum();
        2.0 * sum * self.grid.dx()
    }
}

/// One Strang step on a copy of `psi`; use [`SplitStep`] directly for runs.
pub fn strang_step(
    psi: &WavefunctionGrid,
    potential: &Potential,
    dt: f64,
    params: &SystemParams,
) -> Result<WavefunctionGrid> {
    let mut prop = SplitStep::new(psi.grid, potential.clone(), *params, dt)?;
    let mut out = psi.clone();
    prop.step(&mut out);
    let edge = out.edge_density();
    if edge >= EDGE_DENSITY_LIMIT {
        return Err(Error::DomainExhausted { t: dt, density: edge });
    }
    Ok(out)
}

pub fn expectations(psi: &WavefunctionGrid, potential: &Potential, params: &SystemParams) -> Result<Expectations> {
    // dt is irrelevant for the moments
    Ok(SplitStep::new(psi.grid, potential.clone(), *params, 1.0)?.expectations(psi))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QuantumSeries {
    pub t: Vec<f64>,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub dv_dq: Vec<f64>,
    pub norm: Vec<f64>,
}

impl QuantumSeries {
    fn push(&mut self, t: f64, e: Expectations, norm: f64) {
        self.t.push(t);
        self.q.push(e.q);
        self.p.push(e.p);
        self.dv_dq.push(e.dv_dq);
        self.norm.push(norm);
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Propagates to `t_final` with step `dt_qm`, recording every
/// `sample_every` steps (and at `t = 0`).
pub fn propagate_record(
    psi0: &WavefunctionGrid,
    potential: &Potential,
    params: &SystemParams,
    t_final: f64,
    dt_qm: f64,
    sample_every: usize,
) -> Result<QuantumSeries> {
    if sample_every == 0 {
        return Err(Error::invalid("sample_every", "must be >= 1"));
    }
    let n_steps = step_count(t_final, dt_qm)?;
    let mut prop = SplitStep::new(psi0.grid, potential.clone(), *params, dt_qm)?;
    let mut psi = psi0.clone();
    let mut series = QuantumSeries::default();
    series.push(0.0, prop.expectations(&psi), psi.norm());
    for i in 1..=n_steps {
        prop.step(&mut psi);
        let t = i as f64 * dt_qm;
        let edge = psi.edge_density();
        if edge >= EDGE_DENSITY_LIMIT {
            return Err(Error::DomainExhausted { t, density: edge });
        }
        if i % sample_every == 0 {
            series.push(t, prop.expectations(&psi), psi.norm());
        }
    }
    Ok(series)
}

/// `int x^n exp(-(x - center)^2 / sigma^2) / (sqrt(pi) sigma) dx`.
pub fn gaussian_moment(n: usize, center: f64, sigma: f64) -> f64 {
    (0.5 * sigma).powi(n as i32) * hermite_real(n, center / sigma)
}

/// `<f(q)>` in the initial coherent state (width `b`).
pub fn coherent_average(f: &PolynomialPotential, q0: f64, b: f64) -> f64 {
    f.coefficients()
        .iter()
        .enumerate()
        .map(|(n, &a)| if a == 0.0 { 0.0 } else { a * gaussian_moment(n, q0, b) })
        .sum()
}

/// Exact quantum acceleration to first order in `t`:
/// `-(1/mu) <V'> - (t / 2 mu^2) <{p, V''}>`, with the anticommutator
/// reduced to `2 p_0 <V''>` for the coherent state.
pub fn short_time_accel(pot: &PolynomialPotential, initial: PhasePoint, params: &SystemParams, t: f64) -> f64 {
    let mass = params.mass();
    let b = params.b();
    let force = coherent_average(&pot.derivative_polynomial(1), initial.q, b);
    let curvature = coherent_average(&pot.derivative_polynomial(2), initial.q, b);
    -force / mass - t / (2.0 * mass * mass) * 2.0 * initial.p * curvature
}
