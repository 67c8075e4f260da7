use std::path::Path;
use std::process::{Command, Output};

use ehrenfest::output::from_csv;
use ehrenfest::run::CSV_HEADER;
use ehrenfest::Scenario;

fn ehrenfest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehrenfest"))
        .args(args)
        .output()
        .expect("spawn ehrenfest")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

const HARMONIC: &str = "\
# small harmonic run
[scenario]
name = spring
potential = polynomial
coefficients = 0, 0, 0.5
q0 = 0.5
p0 = 1
hbar = 0.01
b = 0.1
t_final = 1.5

[numerics]
dt = 0.001

[quantum]
x_min = -4
x_max = 4
n_points = 1024
";

#[test]
fn preset_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("harm");
    let out = ehrenfest(&["preset", "harmonic", "--out", path_str(&prefix)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for suffix in [".csv", ".summary.json", ".svg", ".scenario"] {
        assert!(dir.path().join(format!("harm{suffix}")).exists(), "missing {suffix}");
    }
    let csv = std::fs::read_to_string(dir.path().join("harm.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), CSV_HEADER);
    assert_eq!(csv.lines().count(), 2002);

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("harm.summary.json")).unwrap()).unwrap();
    assert!(json["max_abs_q_sc_minus_q_qm"].as_f64().unwrap() < 1e-4);
}

#[test]
fn no_quantum_leaves_columns_empty() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("free");
    let out = ehrenfest(&["preset", "free", "--no-quantum", "--out", path_str(&prefix)]);
    assert!(out.status.success());
    assert!(!dir.path().join("free.summary.json").exists());
    let csv = std::fs::read_to_string(dir.path().join("free.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    assert!(row.ends_with(",,,"), "{row}");
    let svg = std::fs::read_to_string(dir.path().join("free.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
}

#[test]
fn run_config_then_compare() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("spring.cfg");
    std::fs::write(&config, HARMONIC).unwrap();
    let prefix = dir.path().join("spring");
    let out = ehrenfest(&["run", "--config", path_str(&config), "--out", path_str(&prefix)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let cmp = ehrenfest(&["compare", "--csv", path_str(&dir.path().join("spring.csv"))]);
    assert!(cmp.status.success(), "{}", String::from_utf8_lossy(&cmp.stderr));
    let json: serde_json::Value = serde_json::from_slice(&cmp.stdout).unwrap();
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("spring.summary.json")).unwrap()).unwrap();
    // the CSV carries 12 significant digits, so the refit differs slightly
    for key in [
        "turning_time_classical",
        "turning_time_semiclassical",
        "turning_time_quantum",
    ] {
        let (a, b) = (json[key].as_f64().unwrap(), written[key].as_f64().unwrap());
        assert!((a - b).abs() < 1e-7, "{key}: {a} vs {b}");
    }
}

#[test]
fn scenario_echo_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("fig");
    let out = ehrenfest(&["preset", "figure1-hbar01", "--no-quantum", "--out", path_str(&prefix)]);
    assert!(out.status.success());
    let mut expected = Scenario::preset("figure1-hbar01").unwrap();
    expected.quantum.enabled = false;
    assert_eq!(Scenario::load(dir.path().join("fig.scenario")).unwrap(), expected);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for p in [&a, &b] {
        assert!(ehrenfest(&["preset", "cubic", "--no-quantum", "--out", path_str(p)])
            .status
            .success());
    }
    let read = |p: &Path| std::fs::read(p.with_extension("csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out_prefix = dir.path().join("x");

    let unknown = ehrenfest(&["preset", "nonesuch", "--out", path_str(&out_prefix)]);
    assert_eq!(unknown.status.code(), Some(2));

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, HARMONIC.replace("hbar = 0.01", "hbar = -1")).unwrap();
    let out = ehrenfest(&["run", "--config", path_str(&bad), "--out", path_str(&out_prefix)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hbar"));

    let garbled = dir.path().join("garbled.cfg");
    std::fs::write(&garbled, "[scenario]\nthis line has no equals sign\n").unwrap();
    let out = ehrenfest(&["run", "--config", path_str(&garbled), "--out", path_str(&out_prefix)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let missing = ehrenfest(&[
        "run",
        "--config",
        path_str(&dir.path().join("absent.cfg")),
        "--out",
        path_str(&out_prefix),
    ]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn compare_without_quantum_columns_fails() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("c");
    assert!(
        ehrenfest(&["preset", "harmonic", "--no-quantum", "--out", path_str(&prefix)])
            .status
            .success()
    );
    let csv = dir.path().join("c.csv");
    assert!(!from_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap().has_quantum());
    let out = ehrenfest(&["compare", "--csv", path_str(&csv)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("tight.cfg");
    let tight = HARMONIC
        .replace("coefficients = 0, 0, 0.5", "coefficients = 0")
        .replace("t_final = 1.5", "t_final = 2")
        .replace("x_min = -4", "x_min = -0.5")
        .replace("x_max = 4", "x_max = 1.5");
    std::fs::write(&config, tight).unwrap();
    let out = ehrenfest(&[
        "run",
        "--config",
        path_str(&config),
        "--out",
        path_str(&dir.path().join("t")),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("no/such/dir/out");
    let out = ehrenfest(&["preset", "free", "--no-quantum", "--out", path_str(&prefix)]);
    assert_eq!(out.status.code(), Some(4));
}
