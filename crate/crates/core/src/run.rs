//! Runs a scenario across the three path families and compares them.

use serde::{Deserialize, Serialize};

use crate::classical::{integrate, step_count, step_state, ClassicalState};
use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::quantum::{init_coherent, propagate_record};
use crate::scenario::Scenario;
use crate::semiclassical::{accel_hermite, accel_step, integrate_path, sigma};

/// Largest tolerated `|det m - 1|` along a run.
pub const DET_DRIFT_LIMIT: f64 = 1e-8;
/// Largest tolerated `|norm - 1|` along a quantum run.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;

pub const CSV_HEADER: &str = "t,q_c,p_c,m_qq,m_qp,m_pq,m_pp,det_m,sigma,a_sc,q_sc,p_sc,q_qm,p_qm,norm_qm";

/// Aligned time series of the classical, semiclassical and quantum paths.
///
/// The quantum columns are empty when the oracle was disabled.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub name: String,
    pub t: Vec<f64>,
    pub q_c: Vec<f64>,
    pub p_c: Vec<f64>,
    pub m_qq: Vec<f64>,
    pub m_qp: Vec<f64>,
    pub m_pq: Vec<f64>,
    pub m_pp: Vec<f64>,
    pub det_m: Vec<f64>,
    pub sigma: Vec<f64>,
    pub a_sc: Vec<f64>,
    pub q_sc: Vec<f64>,
    pub p_sc: Vec<f64>,
    pub q_qm: Vec<f64>,
    pub p_qm: Vec<f64>,
    pub norm_qm: Vec<f64>,
    /// Quantum `<dV/dq>` samples; not part of the CSV.
    #[serde(default)]
    pub dv_dq_qm: Vec<f64>,
    /// Classical acceleration at `t = 0`, when known.
    #[serde(default)]
    pub a_c0: Option<f64>,
    #[serde(default)]
    pub mass: Option<f64>,
}

impl PathRecord {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn has_quantum(&self) -> bool {
        !self.q_qm.is_empty()
    }

    /// Columns in CSV order.
    pub fn columns(&self) -> [&Vec<f64>; 15] {
        [
            &self.t,
            &self.q_c,
            &self.p_c,
            &self.m_qq,
            &self.m_qp,
            &self.m_pq,
            &self.m_pp,
            &self.det_m,
            &self.sigma,
            &self.a_sc,
            &self.q_sc,
            &self.p_sc,
            &self.q_qm,
            &self.p_qm,
            &self.norm_qm,
        ]
    }

    pub(crate) fn columns_mut(&mut self) -> [&mut Vec<f64>; 15] {
        [
            &mut self.t,
            &mut self.q_c,
            &mut self.p_c,
            &mut self.m_qq,
            &mut self.m_qp,
            &mut self.m_pq,
            &mut self.m_pp,
            &mut self.det_m,
            &mut self.sigma,
            &mut self.a_sc,
            &mut self.q_sc,
            &mut self.p_sc,
            &mut self.q_qm,
            &mut self.p_qm,
            &mut self.norm_qm,
        ]
    }

    /// Quantum acceleration at `t = 0`, `-<dV/dq>/mass`.
    pub fn a_quant0(&self) -> Option<f64> {
        Some(-self.dv_dq_qm.first()? / self.mass?)
    }
}

/// Classical samples on the `dt` grid, by RK4 for polynomials and by the
/// analytic bounce for the step.
pub fn classical_series(s: &Scenario) -> Result<Vec<ClassicalState>> {
    match &s.potential {
        Potential::Polynomial(p) => integrate(s.initial, p, &s.params, s.t_final, s.dt),
        Potential::Step(w) => {
            let n = step_count(s.t_final, s.dt)?;
            Ok((0..=n)
                .map(|i| step_state(s.initial, w, &s.params, i as f64 * s.dt))
                .collect())
        }
    }
}

pub fn run_scenario(s: &Scenario) -> Result<PathRecord> {
    s.validate()?;
    let mass = s.params.mass();
    let states = classical_series(s)?;

    let mut rec = PathRecord {
        name: s.name.clone(),
        mass: Some(mass),
        ..Default::default()
    };
    for st in &states {
        let m = st.tangent;
        let det = m.determinant();
        if (det - 1.0).abs() > DET_DRIFT_LIMIT {
            return Err(Error::Drift {
                what: "tangent determinant",
                drift: det - 1.0,
                limit: DET_DRIFT_LIMIT,
            });
        }
        let width = sigma(&s.params, m.qq, m.qp);
        let a = match &s.potential {
            Potential::Polynomial(p) => accel_hermite(p, st.phase.q, width, mass),
            Potential::Step(w) => accel_step(w, st.phase.q, width, mass),
        };
        rec.t.push(st.t);
        rec.q_c.push(st.phase.q);
        rec.p_c.push(st.phase.p);
        rec.m_qq.push(m.qq);
        rec.m_qp.push(m.qp);
        rec.m_pq.push(m.pq);
        rec.m_pp.push(m.pp);
        rec.det_m.push(det);
        rec.sigma.push(width);
        rec.a_sc.push(a);
    }
    rec.a_c0 = Some(match &s.potential {
        Potential::Polynomial(p) => -p.gradient(s.initial.q) / mass,
        Potential::Step(_) => 0.0,
    });

    let path = integrate_path(&rec.a_sc, s.dt, s.initial, mass)?;
    rec.q_sc = path.q_sc;
    rec.p_sc = path.p_sc;

    if s.quantum.enabled {
        let psi0 = init_coherent(s.quantum.grid, s.initial, &s.params)?;
        let series = propagate_record(
            &psi0,
            &s.potential,
            &s.params,
            s.t_final,
            s.quantum.dt_qm,
            s.quantum.sample_every(s.dt),
        )?;
        if series.len() != rec.len() {
            return Err(Error::invalid("dt_qm", "quantum sampling does not align with dt"));
        }
        if let Some(worst) = series
            .norm
            .iter()
            .map(|n| n - 1.0)
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        {
            if worst.abs() > NORM_DRIFT_LIMIT {
                return Err(Error::Drift {
                    what: "quantum norm",
                    drift: worst,
                    limit: NORM_DRIFT_LIMIT,
                });
            }
        }
        rec.q_qm = series.q;
        rec.p_qm = series.p;
        rec.norm_qm = series.norm;
        rec.dv_dq_qm = series.dv_dq;
    }
    Ok(rec)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub max_abs_q_sc_minus_q_qm: f64,
    pub max_abs_q_c_minus_q_qm: f64,
    pub turning_time_classical: f64,
    pub turning_time_semiclassical: f64,
    pub turning_time_quantum: f64,
    pub a_sc0: f64,
    pub a_quant0: Option<f64>,
    pub a_c0: Option<f64>,
}

/// Time of the maximum of `series`, refined by a parabola through the
/// discrete maximum and its neighbours.
pub fn turning_time(t: &[f64], series: &[f64], label: &'static str) -> Result<f64> {
    let (i, _) = series
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or(Error::NoTurningPoint(label))?;
    if i == 0 || i + 1 >= series.len() {
        return Err(Error::NoTurningPoint(label));
    }
    let (y0, y1, y2) = (series[i - 1], series[i], series[i + 1]);
    let curvature = y0 - 2.0 * y1 + y2;
    let h = t[i + 1] - t[i];
    let shift = if curvature == 0.0 {
        0.0
    } else {
        0.5 * (y0 - y2) / curvature
    };
    Ok((t[i] + shift * h).clamp(t[0], t[t.len() - 1]))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn compare(record: &PathRecord) -> Result<ComparisonSummary> {
    if !record.has_quantum() || record.q_qm.len() != record.len() {
        return Err(Error::MissingQuantum);
    }
    Ok(ComparisonSummary {
        max_abs_q_sc_minus_q_qm: max_abs_diff(&record.q_sc, &record.q_qm),
        max_abs_q_c_minus_q_qm: max_abs_diff(&record.q_c, &record.q_qm),
        turning_time_classical: turning_time(&record.t, &record.q_c, "q_c")?,
        turning_time_semiclassical: turning_time(&record.t, &record.q_sc, "q_sc")?,
        turning_time_quantum: turning_time(&record.t, &record.q_qm, "q_qm")?,
        a_sc0: record.a_sc[0],
        a_quant0: record.a_quant0(),
        a_c0: record.a_c0,
    })
}
