//! Browser bindings for the `ehrenfest` crate.
//!
//! Three operations are exposed to the static page in `www/`:
//! the wall bounce with all three path families, the width dependence of
//! the semiclassical acceleration for a polynomial, and classical vs
//! semiclassical paths for an arbitrary polynomial potential.

use wasm_bindgen::prelude::*;

use ehrenfest::potential::{PolynomialPotential, StepPotential};
use ehrenfest::quantum::Grid;
use ehrenfest::scenario::{QuantumSettings, DEFAULT_DT, DEFAULT_DT_QM};
use ehrenfest::semiclassical::accel_hermite;
use ehrenfest::{compare, run_scenario, PhasePoint, Scenario, SystemParams};

/// Sampled curves handed to JavaScript as `Float64Array`s.
#[wasm_bindgen]
pub struct Curves {
    t: Vec<f64>,
    classical: Vec<f64>,
    semiclassical: Vec<f64>,
    quantum: Vec<f64>,
    turning: Vec<f64>,
}

#[wasm_bindgen]
impl Curves {
    #[wasm_bindgen(getter)]
    pub fn t(&self) -> Vec<f64> {
        self.t.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn classical(&self) -> Vec<f64> {
        self.classical.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn semiclassical(&self) -> Vec<f64> {
        self.semiclassical.clone()
    }

    /// Empty when the quantum oracle was not run.
    #[wasm_bindgen(getter)]
    pub fn quantum(&self) -> Vec<f64> {
        self.quantum.clone()
    }

    /// `[classical, semiclassical, quantum]` turning times, when available.
    #[wasm_bindgen(getter)]
    pub fn turning(&self) -> Vec<f64> {
        self.turning.clone()
    }
}

fn js_err(e: ehrenfest::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Wall bounce: step of height `height` at `wall`, packet from `q0` with
/// momentum `p0`. The quantum grid is coarser than the CLI preset so it
/// stays interactive in the browser.
#[wasm_bindgen]
pub fn step_paths(
    hbar: f64,
    b: f64,
    height: f64,
    wall: f64,
    q0: f64,
    p0: f64,
    quantum: bool,
) -> Result<Curves, JsValue> {
    let params = SystemParams::new(1.0, hbar, b).map_err(js_err)?;
    let initial = PhasePoint::new(q0, p0);
    let t_final = ((1.3 * (wall - q0) / p0) / DEFAULT_DT).round().max(1.0) * DEFAULT_DT;
    let scenario = Scenario {
        name: "step".into(),
        potential: StepPotential::new(height, wall).into(),
        initial,
        params,
        t_final,
        dt: DEFAULT_DT,
        quantum: QuantumSettings {
            enabled: quantum,
            grid: Grid::new(q0 - 12.0, wall + 11.0, 8192).map_err(js_err)?,
            dt_qm: DEFAULT_DT_QM,
        },
    };
    curves(&scenario)
}

/// Classical and semiclassical (optionally quantum) paths for
/// `V = sum coefficients[n] x^n`.
#[wasm_bindgen]
pub fn polynomial_paths(
    coefficients: Vec<f64>,
    hbar: f64,
    b: f64,
    q0: f64,
    p0: f64,
    t_final: f64,
    quantum: bool,
) -> Result<Curves, JsValue> {
    let t_final = (t_final / DEFAULT_DT).round().max(1.0) * DEFAULT_DT;
    let scenario = Scenario {
        name: "polynomial".into(),
        potential: PolynomialPotential::new(coefficients).into(),
        initial: PhasePoint::new(q0, p0),
        params: SystemParams::new(1.0, hbar, b).map_err(js_err)?,
        t_final,
        dt: DEFAULT_DT,
        quantum: QuantumSettings {
            enabled: quantum,
            grid: Grid::new(q0 - 6.0, q0 + 6.0, 4096).map_err(js_err)?,
            dt_qm: DEFAULT_DT_QM,
        },
    };
    curves(&scenario)
}

fn curves(scenario: &Scenario) -> Result<Curves, JsValue> {
    let record = run_scenario(scenario).map_err(js_err)?;
    let turning = compare(&record)
        .map(|s| {
            vec![
                s.turning_time_classical,
                s.turning_time_semiclassical,
                s.turning_time_quantum,
            ]
        })
        .unwrap_or_default();
    Ok(Curves {
        t: record.t,
        classical: record.q_c,
        semiclassical: record.q_sc,
        quantum: record.q_qm,
        turning,
    })
}

/// `a_sc(sigma)` at fixed `q_c` for `n` widths in `[sigma_min, sigma_max]`,
/// returned as interleaved `[sigma, a_sc, ...]` pairs. The classical value
/// is the `sigma -> 0` limit.
#[wasm_bindgen]
pub fn accel_vs_width(coefficients: Vec<f64>, q_c: f64, sigma_min: f64, sigma_max: f64, n: usize) -> Vec<f64> {
    let pot = PolynomialPotential::new(coefficients);
    let n = n.max(2);
    (0..n)
        .flat_map(|i| {
            let s = sigma_min + (sigma_max - sigma_min) * i as f64 / (n - 1) as f64;
            [s, accel_hermite(&pot, q_c, s.max(1e-12), 1.0)]
        })
        .collect()
}

/// Classical acceleration `-V'(q_c)` for reference lines.
#[wasm_bindgen]
pub fn classical_accel(coefficients: Vec<f64>, q_c: f64) -> f64 {
    -PolynomialPotential::new(coefficients).gradient(q_c)
}
