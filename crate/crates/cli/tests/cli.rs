use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_rydberg-cz");

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("RYDBERG_CZ_OUT")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).unwrap()
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "status {:?}\nstdout:\n{}\nstderr:\n{}",
        out.status,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn help_documents_units_exit_codes_and_columns() {
    let out = Command::new(BIN).arg("--help").output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("160MHz") && text.contains("2π·160 rad/μs"));
    assert!(text.contains("RYDBERG_CZ_OUT"));
    assert!(text.contains("Exit codes"));
    for (cmd, column) in [
        ("simulate", "P_<state>"),
        ("scan-theta", "theta_over_pi"),
        ("noise", "detuning_mhz"),
        ("circuit", "bitstring"),
        ("calibrate", "relative_deviation"),
    ] {
        let out = Command::new(BIN).args([cmd, "--help"]).output().unwrap();
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains(column), "{cmd} --help lacks {column}");
    }
}

#[test]
fn calibrate_baseline_width() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["calibrate", "--theta", "pi", "--omega0", "160MHz"]);
    ok(&out);
    let v = json(&dir.path().join("calibrate.json"));
    assert_eq!(v["command"], "calibrate");
    let width = v["result"]["width"].as_f64().unwrap();
    assert!((width - 0.157).abs() < 0.002, "{width}");
    assert!(v["result"]["adiab01_max"].as_f64().unwrap() < 0.15);
    assert!(v["result"]["adiab11_max"].as_f64().unwrap() < 0.15);
    let omega0 = v["scenario"]["omega0"].as_f64().unwrap();
    assert!((omega0 - 2.0 * std::f64::consts::PI * 160.0).abs() < 1e-9);
}

#[test]
fn calibrate_refuses_tiny_phases() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["calibrate", "--theta", "0.05pi"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("below the supported range"), "{err}");
}

#[test]
fn calibrate_reports_no_bracket() {
    let dir = tempfile::tempdir().unwrap();
    // A weak drive cannot accumulate π within the bracketing window.
    let out = run_in(dir.path(), &["calibrate", "--omega0", "5MHz"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn reference_slopes_within_two_percent() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["calibrate", "--table2"]);
    ok(&out);
    let v = json(&dir.path().join("reference_slopes.json"));
    let rows = v["result"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let dev = row["relative_deviation"].as_f64().unwrap();
        assert!(dev.abs() < 0.02, "{row}");
    }
    let csv = std::fs::read_to_string(dir.path().join("reference_slopes.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn simulate_pulse_variants() {
    for (args, want) in [
        (vec!["--pulse", "staircase"], 0.9977),
        (vec!["--pulse", "corrected"], 0.9979),
        (vec!["--species", "cs133"], 0.9981),
    ] {
        let dir = tempfile::tempdir().unwrap();
        let mut all = vec!["simulate"];
        all.extend(&args);
        ok(&run_in(dir.path(), &all));
        let v = json(&dir.path().join("simulate.json"));
        let f = v["result"]["fidelity"].as_f64().unwrap();
        assert!((f - want).abs() <= 5e-4, "{args:?}: {f}");
        let csv = std::fs::read_to_string(dir.path().join("populations.csv")).unwrap();
        assert!(csv.starts_with("t,P_11,"));
    }
}

#[test]
fn simulate_flags_unstable_steps() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["simulate", "--dt", "5e-4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["noise", "--channel", "intensity", "--channel", "detuning", "--trials", "3", "--seed", "11"];
    ok(&run_in(a.path(), &args));
    ok(&run_in(b.path(), &args));
    for name in ["noise.json", "noise.csv"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs");
    }
    let v = json(&a.path().join("noise.json"));
    assert_eq!(v["scenario"]["noise"]["trials"], 3);
    assert_eq!(v["scenario"]["seed"], 11);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
}

#[test]
fn scenario_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("s.toml");
    std::fs::write(
        &scenario,
        r#"
        species = "rb87"
        [gate]
        omega0 = "140MHz"
        theta = "pi/2"
        [pulse]
        shape = "gaussian"
        "#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let s = scenario.to_str().unwrap();
    ok(&run_in(&out_dir, &["calibrate", "--scenario", s]));
    let v = json(&out_dir.join("calibrate.json"));
    let width = v["result"]["width"].as_f64().unwrap();
    let expected = std::f64::consts::FRAC_PI_2 / 13.337;
    assert!((width - expected).abs() < 0.03 * expected, "{width}");

    ok(&run_in(&out_dir, &["calibrate", "--scenario", s, "--omega0", "160MHz"]));
    let v = json(&out_dir.join("calibrate.json"));
    assert_eq!(v["result"]["omega0_mhz"], 160.0);

    std::fs::write(&scenario, "[gate]\nomega_zero = 1\n").unwrap();
    let out = run_in(&out_dir, &["calibrate", "--scenario", s]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(BIN)
        .args(["calibrate"])
        .env("RYDBERG_CZ_OUT", dir.path())
        .output()
        .unwrap();
    ok(&out);
    assert!(dir.path().join("calibrate.json").exists());
}

#[test]
fn scan_theta_picks_the_fastest_row() {
    let dir = tempfile::tempdir().unwrap();
    ok(&run_in(dir.path(), &["scan-theta", "--from", "0.5pi", "--to", "pi", "--points", "2", "--no-decay"]));
    let v = json(&dir.path().join("scan_theta.json"));
    let points = v["result"].as_array().unwrap();
    assert_eq!(points[0]["omega0_mhz"], 140.0);
    assert_eq!(points[1]["omega0_mhz"], 160.0);
    for p in points {
        assert!(p["gate_time"].as_f64().unwrap() < 1.0);
    }
}

#[test]
fn ideal_maxcut_peaks_on_the_two_cuts() {
    let dir = tempfile::tempdir().unwrap();
    ok(&run_in(dir.path(), &["circuit", "maxcut", "--ideal"]));
    let v = json(&dir.path().join("maxcut.json"));
    for run in v["result"]["runs"].as_array().unwrap() {
        assert!((run["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-9);
        let p = run["distribution"]["probabilities"].as_array().unwrap();
        let p: Vec<f64> = p.iter().map(|x| x.as_f64().unwrap()).collect();
        let top = p.iter().cloned().fold(0.0, f64::max);
        assert!((p[0b010] - top).abs() < 1e-12 && (p[0b101] - top).abs() < 1e-12);
    }
}

#[test]
fn circuit_channels_are_cached() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["circuit", "qft", "--scheme", "cz-decomposition"];
    ok(&run_in(dir.path(), &args));
    let first = json(&dir.path().join("qft.json"));
    assert_eq!(first["result"]["channels"][0]["cached"], false);
    let hash = first["result"]["channels"][0]["params_hash"].as_str().unwrap().to_string();
    assert!(dir.path().join("channels").join(format!("{hash}.json")).exists());
    ok(&run_in(dir.path(), &args));
    let second = json(&dir.path().join("qft.json"));
    assert_eq!(second["result"]["channels"][0]["cached"], true);
    assert_eq!(first["result"]["runs"], second["result"]["runs"]);
    let csv = std::fs::read_to_string(dir.path().join("qft_distribution.csv")).unwrap();
    assert!(csv.starts_with("bitstring,ideal,cz-decomposition"));
}
