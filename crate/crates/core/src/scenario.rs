//! Scenario configuration: presets, the `[section]` / `key = value` file
//! format, and validation.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classical::{step_count, PhasePoint, SystemParams};
use crate::error::{Error, Result};
use crate::potential::{PolynomialPotential, Potential, StepPotential};
use crate::quantum::Grid;

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_DT_QM: f64 = 1e-4;
pub const DEFAULT_MASS: f64 = 1.0;

pub const PRESET_NAMES: [&str; 6] = [
    "free",
    "linear",
    "harmonic",
    "cubic",
    "figure1-hbar005",
    "figure1-hbar01",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumSettings {
    pub enabled: bool,
    pub grid: Grid,
    pub dt_qm: f64,
}

impl QuantumSettings {
    /// Quantum steps per classical sample.
    pub fn sample_every(&self, dt: f64) -> usize {
        (dt / self.dt_qm).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub potential: Potential,
    pub initial: PhasePoint,
    pub params: SystemParams,
    pub t_final: f64,
    pub dt: f64,
    pub quantum: QuantumSettings,
}

impl Scenario {
    pub fn preset(name: &str) -> Result<Scenario> {
        let desk = |potential: Potential, t_final: f64, x_min: f64, x_max: f64, n: usize| -> Result<Scenario> {
            Ok(Scenario {
                name: name.to_string(),
                potential,
                initial: PhasePoint::new(0.5, 1.0),
                params: SystemParams::new(1.0, 0.01, 0.1)?,
                t_final,
                dt: DEFAULT_DT,
                quantum: QuantumSettings {
                    enabled: true,
                    grid: Grid::new(x_min, x_max, n)?,
                    dt_qm: DEFAULT_DT_QM,
                },
            })
        };
        let figure1 = |hbar: f64| -> Result<Scenario> {
            Ok(Scenario {
                name: name.to_string(),
                potential: StepPotential::new(5.0, 1.0).into(),
                initial: PhasePoint::new(0.0, 1.0),
                params: SystemParams::new(1.0, hbar, 0.1)?,
                t_final: 1.3,
                dt: DEFAULT_DT,
                quantum: QuantumSettings {
                    enabled: true,
                    grid: Grid::new(-12.0, 12.0, 4096)?,
                    dt_qm: DEFAULT_DT_QM,
                },
            })
        };
        let scenario = match name {
            "free" => desk(PolynomialPotential::new(vec![0.0]).into(), 2.0, -4.0, 6.0, 2048)?,
            "linear" => desk(PolynomialPotential::new(vec![0.0, 1.0]).into(), 2.0, -4.0, 4.0, 2048)?,
            "harmonic" => desk(PolynomialPotential::harmonic(1.0, 1.0).into(), 2.0, -4.0, 4.0, 2048)?,
            "cubic" => {
                let mut s = desk(PolynomialPotential::cubic(0.5).into(), 1.5, -3.0, 3.0, 2048)?;
                s.initial = PhasePoint::new(0.3, 1.0);
                s
            }
            "figure1-hbar005" => figure1(0.05)?,
            "figure1-hbar01" => figure1(0.1)?,
            other => return Err(Error::UnknownPreset(other.to_string())),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |field: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(field, format!("must be finite, got {v}")))
            }
        };
        finite("q0", self.initial.q)?;
        finite("p0", self.initial.p)?;
        step_count(self.t_final, self.dt)?;
        match &self.potential {
            Potential::Polynomial(p) => {
                for (i, a) in p.coefficients().iter().enumerate() {
                    finite(&format!("coefficients[{i}]"), *a)?;
                }
            }
            Potential::Step(s) => {
                finite("wall", s.wall)?;
                if !(s.height.is_finite() && s.height > 0.0) {
                    return Err(Error::invalid("height", "must be finite and > 0"));
                }
                if !(self.initial.p > 0.0) {
                    return Err(Error::invalid("p0", "step scenarios need p0 > 0"));
                }
                if !(self.initial.q < s.wall) {
                    return Err(Error::invalid("q0", "step scenarios need q0 < wall"));
                }
                let barrier = (2.0 * self.params.mass() * s.height).sqrt();
                if !(self.initial.p < barrier) {
                    return Err(Error::invalid(
                        "p0",
                        format!("must be below the barrier momentum sqrt(2 mass height) = {barrier}"),
                    ));
                }
            }
        }
        let q = &self.quantum;
        if !(q.dt_qm.is_finite() && q.dt_qm > 0.0) {
            return Err(Error::invalid("dt_qm", "must be finite and > 0"));
        }
        let ratio = self.dt / q.dt_qm;
        if ratio < 1.0 - 1e-9 || (ratio - ratio.round()).abs() > 1e-6 {
            return Err(Error::invalid("dt_qm", format!("must divide dt = {}", self.dt)));
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Parses the `[scenario]` / `[numerics]` / `[quantum]` format and
    /// applies defaults.
    pub fn parse(text: &str) -> Result<Scenario> {
        let entries = parse_sections(text)?;
        let get = |section: &str, key: &str| {
            entries
                .iter()
                .find(|e| e.section == section && e.key == key)
                .map(|e| e.value.as_str())
        };
        let number = |section: &str, key: &str, default: Option<f64>| -> Result<f64> {
            match get(section, key) {
                Some(v) => v
                    .parse::<f64>()
                    .map_err(|_| Error::invalid(key, format!("`{v}` is not a number"))),
                None => default.ok_or_else(|| Error::invalid(key, "missing")),
            }
        };

        let name = get("scenario", "name").unwrap_or("custom").to_string();
        let potential: Potential = match get("scenario", "potential").unwrap_or("polynomial") {
            "polynomial" => {
                let raw = get("scenario", "coefficients").ok_or_else(|| Error::invalid("coefficients", "missing"))?;
                let coefficients = raw
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::invalid("coefficients", format!("`{}` is not a number", c.trim())))
                    })
                    .collect::<Result<Vec<_>>>()?;
                PolynomialPotential::new(coefficients).into()
            }
            "step" => StepPotential::new(number("scenario", "height", None)?, number("scenario", "wall", None)?).into(),
            other => return Err(Error::invalid("potential", format!("unknown family `{other}`"))),
        };
        let initial = PhasePoint::new(number("scenario", "q0", None)?, number("scenario", "p0", None)?);
        let params = SystemParams::new(
            number("scenario", "mass", Some(DEFAULT_MASS))?,
            number("scenario", "hbar", None)?,
            number("scenario", "b", None)?,
        )?;
        let t_final = number("scenario", "t_final", None)?;
        let dt = number("numerics", "dt", Some(DEFAULT_DT))?;

        let enabled = match get("quantum", "enabled").unwrap_or("true") {
            "true" => true,
            "false" => false,
            other => return Err(Error::invalid("enabled", format!("expected true/false, got `{other}`"))),
        };
        let n_points = match get("quantum", "n_points") {
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| Error::invalid("n_points", format!("`{v}` is not a positive integer")))?,
            None => 2048,
        };
        let grid = Grid::new(
            number("quantum", "x_min", Some(-4.0))?,
            number("quantum", "x_max", Some(4.0))?,
            n_points,
        )?;
        let quantum = QuantumSettings {
            enabled,
            grid,
            dt_qm: number("quantum", "dt_qm", Some(DEFAULT_DT_QM))?,
        };
        let scenario = Scenario {
            name,
            potential,
            initial,
            params,
            t_final,
            dt,
            quantum,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Serialises back into the config format; `parse` reproduces `self`.
    pub fn to_config(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[scenario]");
        let _ = writeln!(out, "name = {}", self.name);
        match &self.potential {
            Potential::Polynomial(p) => {
                let coeffs: Vec<String> = p.coefficients().iter().map(|c| format!("{c:?}")).collect();
                let _ = writeln!(out, "potential = polynomial");
                let _ = writeln!(out, "coefficients = {}", coeffs.join(", "));
            }
            Potential::Step(s) => {
                let _ = writeln!(out, "potential = step");
                let _ = writeln!(out, "height = {:?}", s.height);
                let _ = writeln!(out, "wall = {:?}", s.wall);
            }
        }
        let _ = writeln!(out, "q0 = {:?}", self.initial.q);
        let _ = writeln!(out, "p0 = {:?}", self.initial.p);
        let _ = writeln!(out, "mass = {:?}", self.params.mass());
        let _ = writeln!(out, "hbar = {:?}", self.params.hbar());
        let _ = writeln!(out, "b = {:?}", self.params.b());
        let _ = writeln!(out, "t_final = {:?}", self.t_final);
        let _ = writeln!(out, "\n[numerics]");
        let _ = writeln!(out, "dt = {:?}", self.dt);
        let _ = writeln!(out, "\n[quantum]");
        let _ = writeln!(out, "enabled = {}", self.quantum.enabled);
        let _ = writeln!(out, "x_min = {:?}", self.quantum.grid.x_min());
        let _ = writeln!(out, "x_max = {:?}", self.quantum.grid.x_max());
        let _ = writeln!(out, "n_points = {}", self.quantum.grid.len());
        let _ = writeln!(out, "dt_qm = {:?}", self.quantum.dt_qm);
        out
    }
}

struct Entry {
    section: String,
    key: String,
    value: String,
}

const KNOWN_KEYS: [(&str, &[&str]); 3] = [
    (
        "scenario",
        &[
            "name",
            "potential",
            "coefficients",
            "height",
            "wall",
            "q0",
            "p0",
            "mass",
            "hbar",
            "b",
            "t_final",
        ],
    ),
    ("numerics", &["dt"]),
    ("quantum", &["enabled", "x_min", "x_max", "n_points", "dt_qm"]),
];

fn parse_sections(text: &str) -> Result<Vec<Entry>> {
    let mut section: Option<String> = None;
    let mut entries: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: line_no, message };
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| parse_err(format!("unterminated section header `{line}`")))?
                .trim();
            if !KNOWN_KEYS.iter().any(|(s, _)| *s == name) {
                return Err(parse_err(format!("unknown section `[{name}]`")));
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let current = section
            .as_deref()
            .ok_or_else(|| parse_err("key outside of any section".to_string()))?;
        let known = KNOWN_KEYS
            .iter()
            .find(|(s, _)| *s == current)
            .map(|(_, keys)| keys.contains(&key))
            .unwrap_or(false);
        if !known {
            return Err(parse_err(format!("unknown key `{key}` in [{current}]")));
        }
        if entries.iter().any(|e| e.section == current && e.key == key) {
            return Err(parse_err(format!("duplicate key `{key}`")));
        }
        entries.push(Entry {
            section: current.to_string(),
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const MINIMAL: &str = "
[scenario]
potential = polynomial
coefficients = 0, 0, 0.5
q0 = 0.5
p0 = 1
hbar = 0.01
b = 0.1
t_final = 2
";

    #[test]
    fn presets_are_valid() {
        for name in PRESET_NAMES {
            let s = Scenario::preset(name).unwrap();
            assert_eq!(s.name, name);
        }
        assert!(matches!(Scenario::preset("nope"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn figure1_preset_parameters() {
        let s = Scenario::preset("figure1-hbar005").unwrap();
        assert_eq!(s.potential, Potential::Step(StepPotential::new(5.0, 1.0)));
        assert_eq!(s.initial, PhasePoint::new(0.0, 1.0));
        assert_eq!((s.params.mass(), s.params.hbar(), s.params.b()), (1.0, 0.05, 0.1));
        assert_eq!(s.t_final, 1.3);
        assert_eq!(Scenario::preset("figure1-hbar01").unwrap().params.hbar(), 0.1);
    }

    #[test]
    fn defaults_applied() {
        let s = Scenario::parse(MINIMAL).unwrap();
        assert_eq!(s.params.mass(), 1.0);
        assert_eq!(s.dt, DEFAULT_DT);
        assert_eq!(s.quantum.dt_qm, DEFAULT_DT_QM);
        assert!(s.quantum.enabled);
        assert_eq!(s.quantum.sample_every(s.dt), 10);
    }

    #[test]
    fn parse_errors_name_the_problem() {
        let err = Scenario::parse("[scenario]\nq0 = 1\n[bogus]\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = Scenario::parse("q0 = 1").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = Scenario::parse(&MINIMAL.replace("hbar = 0.01", "hbar = abc")).unwrap_err();
        assert!(
            matches!(err, Error::Invalid { ref field, .. } if field == "hbar"),
            "{err}"
        );
        let err = Scenario::parse(&MINIMAL.replace("b = 0.1", "")).unwrap_err();
        assert!(matches!(err, Error::Invalid { ref field, .. } if field == "b"), "{err}");
        let err = Scenario::parse(&format!("{MINIMAL}\n[numerics]\ndt = 0.3\n")).unwrap_err();
        assert!(
            matches!(err, Error::Invalid { ref field, .. } if field == "dt"),
            "{err}"
        );
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn step_above_barrier_rejected() {
        let text = "
[scenario]
potential = step
height = 5
wall = 1
q0 = 0
p0 = 3.2
hbar = 0.05
b = 0.1
t_final = 1.3
";
        let err = Scenario::parse(text).unwrap_err();
        assert!(
            matches!(err, Error::Invalid { ref field, .. } if field == "p0"),
            "{err}"
        );
        assert!(Scenario::parse(&text.replace("p0 = 3.2", "p0 = 3.1")).is_ok());
        assert!(Scenario::parse(&text.replace("q0 = 0", "q0 = 2").replace("p0 = 3.2", "p0 = 1")).is_err());
    }

    #[test]
    fn preset_round_trip() {
        for name in PRESET_NAMES {
            let s = Scenario::preset(name).unwrap();
            assert_eq!(Scenario::parse(&s.to_config()).unwrap(), s);
        }
    }

    proptest! {
        #[test]
        fn config_round_trip(
            coefficients in prop::collection::vec(-5.0f64..5.0, 1..6),
            q0 in -1.0f64..1.0,
            p0 in -2.0f64..2.0,
            mass in 0.1f64..10.0,
            hbar in 1e-4f64..1.0,
            b in 0.01f64..1.0,
            steps in 1usize..5000,
            enabled in any::<bool>(),
        ) {
            let s = Scenario {
                name: "prop".into(),
                potential: PolynomialPotential::new(coefficients).into(),
                initial: PhasePoint::new(q0, p0),
                params: SystemParams::new(mass, hbar, b).unwrap(),
                t_final: steps as f64 * 1e-3,
                dt: 1e-3,
                quantum: QuantumSettings { enabled, grid: Grid::new(-5.0, 5.0, 1024).unwrap(), dt_qm: 1e-4 },
            };
            prop_assert_eq!(Scenario::parse(&s.to_config()).unwrap(), s);
        }
    }
}
