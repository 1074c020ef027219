use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use eur_core::io::state_to_json;
use eur_core::{make_state, Family, StateSpec};

fn eur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eur"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn report_on_ghz_file() {
    let dir = tempfile::tempdir().unwrap();
    let ghz = make_state(&StateSpec::new(Family::Ghz)).unwrap();
    let path = write(dir.path(), "ghz.json", &state_to_json(&ghz));
    let out = eur(&[
        "report",
        "--state-file",
        &path,
        "--obs-x",
        "sigma1",
        "--obs-z",
        "sigma3",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((report["bound_new"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((report["lhs_tripartite"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "bad.json",
        "{\"dims\": [2, 2],\n \"matrix\": [[1, 0],, ]}",
    );
    let out = eur(&["report", "--state-file", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn dimension_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut entries = vec![[0.0, 0.0]; 16];
    for i in 0..4 {
        entries[i * 5] = [0.25, 0.0];
    }
    let text = serde_json::json!({"dims": [2, 2, 2], "matrix": entries}).to_string();
    let path = write(dir.path(), "mismatch.json", &text);
    assert_eq!(
        eur(&["report", "--state-file", &path]).status.code(),
        Some(2)
    );
}

#[test]
fn invalid_density_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let text =
        serde_json::json!({"dims": [2], "matrix": [[1, 0], [0, 0], [0, 0], [-1, 0]]}).to_string();
    let path = write(dir.path(), "neg.json", &text);
    let out = eur(&["report", "--state-file", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eigenvalue"));
}

#[test]
fn sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = eur(&["sweep", "--preset", "fig2", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (a, b) = (fs::read(a).unwrap(), fs::read(b).unwrap());
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 102);
}

#[test]
fn two_step_sweep() {
    let out = eur(&[
        "sweep", "--state", "werner", "--param", "p", "--from", "0", "--to", "1", "--steps", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("param,lhs_tripartite,bound_new"));
    assert!(lines[1].starts_with("0,"));
    assert!(lines[2].starts_with("1,"));
}

#[test]
fn column_subset() {
    let out = eur(&[
        "sweep",
        "--state",
        "gw:phi=0.5",
        "--param",
        "theta",
        "--from",
        "0",
        "--to",
        "1",
        "--steps",
        "3",
        "--columns",
        "bound_new,delta_new",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("param,bound_new,delta_new"));
}

#[test]
fn sweep_usage_errors_exit_2() {
    assert_eq!(eur(&["sweep", "--preset", "fig9"]).status.code(), Some(2));
    assert_eq!(
        eur(&["sweep", "--state", "werner", "--param", "p"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        eur(&[
            "sweep", "--state", "werner", "--param", "beta", "--from", "0", "--to", "1", "--steps",
            "3"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        eur(&[
            "sweep", "--state", "werner", "--param", "p", "--from", "0", "--to", "1", "--steps",
            "3", "--obs-x", "nosuch"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        eur(&["sweep", "--preset", "fig1", "--state", "ghz"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn small_check_runs() {
    let out = eur(&["check", "--n", "5", "--seed", "1", "--json"]);
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["n"], 5);
    let code = out.status.code().unwrap();
    let violations: u64 = summary["invariants"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["violations"].as_u64().unwrap())
        .sum();
    assert_eq!(code, if violations == 0 { 0 } else { 1 });
    assert_eq!(eur(&["check", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn saturation_on_ghz() {
    let out = eur(&["check-saturation", "--preset", "ghz"]);
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r["ssa_residual"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(r["ssa_saturated"], true);
    assert_eq!(eur(&["check-saturation"]).status.code(), Some(2));
}

#[test]
fn observable_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let y = write(
        dir.path(),
        "y.json",
        r#"{"matrix": [[0,0],[0,-1],[0,1],[0,0]]}"#,
    );
    let out = eur(&["check-saturation", "--preset", "bell", "--obs-x", &y]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
