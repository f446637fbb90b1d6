use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qbat(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbat"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn steady_point_prints_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let o = qbat(dir.path(), &["steady", "--pump", "1", "--gamma", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    // k = l = 1: alpha = 2481, E_A = 932/2481, E_B = 752/2481.
    assert!((v["e_a"].as_f64().unwrap() - 932.0 / 2481.0).abs() < 1e-12);
    assert!((v["e_b"].as_f64().unwrap() - 752.0 / 2481.0).abs() < 1e-12);

    let n = qbat(dir.path(), &["steady", "--pump", "1", "--gamma", "1", "--numeric"]);
    let w: serde_json::Value = serde_json::from_str(stdout(&n).trim()).unwrap();
    assert!((w["e_b"].as_f64().unwrap() - 752.0 / 2481.0).abs() < 1e-9);
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qbat(dir.path(), &["steady"]).status.code(), Some(2));
    assert_eq!(qbat(dir.path(), &["scenario", "fig9"]).status.code(), Some(2));
    assert_eq!(qbat(dir.path(), &["evolve"]).status.code(), Some(2));
    assert_eq!(
        qbat(dir.path(), &["steady", "--reservoir", "fermionic", "--n", "1.5", "--gamma", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(qbat(dir.path(), &["scenario", "fig4", "--dt", "-1"]).status.code(), Some(2));
    fs::write(dir.path().join("bad.toml"), "[[scenario]]\nname = 3\n").unwrap();
    assert_eq!(
        qbat(dir.path(), &["evolve", "--config", "bad.toml"]).status.code(),
        Some(2)
    );
}

#[test]
fn failed_claim_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.toml"),
        r#"
[[scenario]]
name = "lossy"
params = { gamma = 0.1 }
initial_state = "eg"
integrator = { dt = 0.002, t_max = 4.0, record_every = 10 }
claims = [{ kind = "steering_peak_value", direction = "ab", expected = 0.634, tolerance = 0.001 }]
"#,
    )
    .unwrap();
    let o = qbat(dir.path(), &["evolve", "--config", "run.toml", "--out", "res"]);
    assert_eq!(o.status.code(), Some(1));
    // Outputs are still written.
    assert!(dir.path().join("res/lossy.csv").exists());
    assert!(dir.path().join("res/lossy_manifest.json").exists());
}

#[test]
fn scenario_preset_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = qbat(dir.path(), &["scenario", "fig4", "--out", "o", "--t-max", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for panel in ["fig4a", "fig4b", "fig4c", "fig4d"] {
        let csv = fs::read_to_string(dir.path().join(format!("o/{panel}.csv"))).unwrap();
        assert_eq!(
            csv.lines().next().unwrap(),
            "t,E_A,E_B,W_B,sz_B,S_AB,S_BA,purity_A,purity_B,trace_err"
        );
        assert_eq!(csv.lines().count(), 152);
        let maxima: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(format!("o/{panel}_maxima.json"))).unwrap())
                .unwrap();
        assert!(maxima["max_s_ab"]["time"].is_number());
        let manifest: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(format!("o/{panel}_manifest.json"))).unwrap())
                .unwrap();
        assert_eq!(manifest["resolved_dt"].as_f64(), Some(0.001));
    }
}

#[test]
fn json_format_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("s.toml"),
        r#"
[[sweep]]
name = "tiny"
x = { param = "k", start = 0.5, stop = 1.0, points = 2 }
y = { param = "l", start = 0.5, stop = 1.0, points = 2 }
"#,
    )
    .unwrap();
    let o = qbat(dir.path(), &["steady", "--config", "s.toml", "--format", "json", "--out", "."]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("tiny.json")).unwrap()).unwrap();
    assert_eq!(v["e_b"][1][1].as_f64().map(|e| (e - 752.0 / 2481.0).abs() < 1e-9), Some(true));

    let csv = qbat(dir.path(), &["steady", "--config", "s.toml", "--out", "c"]);
    assert_eq!(csv.status.code(), Some(0));
    let table = fs::read_to_string(dir.path().join("c/tiny_E_B_inf.csv")).unwrap();
    assert!(table.starts_with("Gamma_over_g\\F_over_g,"));
}

#[test]
fn power_compare_default_pair() {
    let dir = tempfile::tempdir().unwrap();
    let o = qbat(dir.path(), &["power-compare", "--out", "."]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("power_compare.json")).unwrap()).unwrap();
    let ratio = v["ratio"].as_f64().unwrap();
    assert!((1.6..=2.4).contains(&ratio), "{ratio}");
    assert!(stdout(&o).contains("ratio"));
}

#[test]
fn validate_passes_with_few_samples() {
    let dir = tempfile::tempdir().unwrap();
    let o = qbat(dir.path(), &["validate", "--samples", "200"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("PASS closed Rabi oscillation"));
    assert!(!out.contains("FAIL"));
}
