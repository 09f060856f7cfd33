use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac-morse")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn rows(csv_text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(csv_text.as_bytes()).records().map(|r| r.unwrap()).collect()
}

#[test]
fn reference_spectrum_has_eight_rows_with_ground_pair_at_c() {
    let o = run(&["spectrum"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("n,branch,epsilon,alpha_n,valid,shooting_epsilon,abs_delta\n"));
    let rows = rows(&text);
    assert_eq!(rows.len(), 8);
    let ground: Vec<f64> = rows.iter().filter(|r| &r[0] == "0").map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(ground, vec![0.6, -0.6]);
    for r in rows.iter().filter(|r| &r[4] == "true") {
        let delta: f64 = r[6].parse().unwrap();
        assert!(delta <= 1e-6, "{r:?}");
    }
}

#[test]
fn zero_strength_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a0.json", r#"{"model": {"a": 0.0, "omega": 0.5, "xi": 0.8, "lambda_c": 1.0}}"#);
    let o = run(&["spectrum", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("potential strength A must be finite and nonzero"), "{}", stderr(&o));
}

#[test]
fn json_output_round_trips_through_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.json",
        r#"{"model": {"a": -1.3, "omega": 0.1, "xi": 0.9, "lambda_c": 1.0}, "energy": 1.5, "n_terms": 12, "format": "json"}"#,
    );
    let o = run(&["coefficients", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["results"].as_array().unwrap().len(), 12);
    let echoed = write_config(dir.path(), "echo.json", &doc["config"].to_string());
    let again = run(&["coefficients", "--config", &echoed]);
    assert_eq!(again.status.code(), Some(0), "{}", stderr(&again));
    assert_eq!(stdout(&again), stdout(&o));
}

#[test]
fn bound_ground_state_residual_is_small() {
    let o = run(&["wavefunction", "--state", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("x,z,phi_upper,theta_lower,ode_residual\n"));
    let rows = rows(&text);
    assert_eq!(rows.len(), 201);
    for r in &rows {
        let res: f64 = r[4].parse().unwrap();
        assert!(res.abs() <= 1e-6, "{r:?}");
    }
}

#[test]
fn energy_below_threshold_is_rejected() {
    for e in ["0.9", "-0.9"] {
        let o = run(&["wavefunction", "--energy", e]);
        assert_eq!(o.status.code(), Some(2));
        assert!(stderr(&o).contains("bound-state regime; use spectrum"), "{}", stderr(&o));
    }
}

#[test]
fn empty_grid_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "grid.json", r#"{"grid": {"x_min": 2.0, "x_max": 2.0, "n_points": 50}}"#);
    let o = run(&["wavefunction", "--state", "0", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("empty grid"));
}

#[test]
fn verify_passes_by_default() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(!text.contains("[FAIL]"));
    for suite in ["tridiagonality/", "cdh/", "laguerre/", "degeneracy/", "bound/", "limits/"] {
        assert!(text.contains(suite), "missing {suite}");
    }
}

#[test]
fn injected_fault_breaks_tridiagonality() {
    let o = run(&["verify", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("[FAIL] tridiagonality/quadrature elements vanish off the band"), "{text}");
}

#[test]
fn only_filter_runs_one_suite() {
    let o = run(&["verify", "--only=cdh"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let checks: Vec<&str> = text.lines().filter(|l| l.starts_with('[')).collect();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|l| l.contains("] cdh/")), "{checks:?}");
}

#[test]
fn csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let o = run(&["wavefunction", "--energy", "1.25", "--n-terms", "16", "--output", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn numbers_carry_seventeen_significant_digits() {
    let o = run(&["coefficients", "--energy", "-1.6", "--n-terms", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for r in rows(&stdout(&o)) {
        for cell in [&r[1], &r[2]] {
            let mantissa = cell.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{cell}");
        }
    }
}

#[test]
fn conflicting_requests_are_usage_errors() {
    assert_eq!(run(&["wavefunction"]).status.code(), Some(2));
    assert_eq!(run(&["wavefunction", "--state", "0", "--energy", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["coefficients"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--bogus"]).status.code(), Some(2));
}
