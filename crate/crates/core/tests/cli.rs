use std::process::{Command, Output};

use serde_json::Value;

fn bcv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcv")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn classify_outputs() {
    let out = bcv(&["classify", "--m", "1", "--l", "0", "--r", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["case", "roots", "radius", "r_bound"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["roots"].as_array().unwrap().len(), 1);
    assert!((f(&v["roots"][0]) - 8.0).abs() < 1e-12);
    assert!((f(&v["radius"][0]) - 1.0 / 12f64.sqrt()).abs() < 1e-12);

    let v = json(&bcv(&["classify", "--m", "-1", "--l", "1", "--r", "7"]));
    assert_eq!(v["case"], "NoSolution");
    let v = json(&bcv(&["classify", "--m", "0.9", "--l", "2", "--r", "10"]));
    assert_eq!(v["case"], "SU2NegativeCase");
    assert!((f(&v["r_bound"]) - 8.98142).abs() < 1e-3);
}

#[test]
fn exit_codes() {
    assert_eq!(bcv(&["classify", "--m", "1", "--l", "0", "--r", "1"]).status.code(), Some(1));
    assert_eq!(bcv(&["classify", "--m", "x", "--l", "0", "--r", "3"]).status.code(), Some(1));
    assert_eq!(bcv(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bcv(&["--help"]).status.code(), Some(0));
    let out = bcv(&["helicoid", "--alpha", "2", "--m", "-1", "--l", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(bcv(&["rtension", "--m", "1", "--l", "1", "--kappa", "1", "--r", "0"]).status.code(), Some(1));
    assert_eq!(bcv(&["diagram", "--res", "1"]).status.code(), Some(1));
}

#[test]
fn verify_core_suite_passes() {
    let out = bcv(&["verify", "--suite", "core"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    let checks = suites[0]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["passed"] == true && c.get("residual").is_some()));
}

#[test]
fn verify_fails_with_impossible_tolerance() {
    let out = bcv(&["verify", "--suite", "core", "--tol-first", "1e-300", "--tol-second", "1e-300"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn tension_commands() {
    let v = json(&bcv(&["tension3", "--m", "1", "--l", "0", "--kappa", "2.8284271247461903"]));
    for key in ["x", "e3", "eta"] {
        assert!(f(&v[key]).abs() < 1e-12);
    }
    let v = json(&bcv(&["rtension", "--m", "1", "--l", "2", "--kappa", "1", "--r", "5"]));
    assert!(f(&v["eta"]).abs() < 1e-12);
    let v = json(&bcv(&["rtension", "--m", "0.3", "--l", "-1.7", "--kappa", "-0.8", "--r", "3"]));
    let (l2, k) = (1.7f64 * 1.7, -0.8f64);
    let expect = -(k / 4.0) * (l2 + 4.0 * k * k) * (2.0 * l2 - 8.0 * 0.3 + k * k);
    assert!((f(&v["eta"]) - expect).abs() < 1e-12);
}

#[test]
fn helicoid_command() {
    let out = bcv(&["helicoid", "--alpha", "0.5", "--m", "-1", "--l", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let t: Vec<f64> = v["T"].as_array().unwrap().iter().map(f).collect();
    assert!((t[0] - 102.5).abs() < 1e-9 && (t[1] - 102.5).abs() < 1e-9 && (t[2] + 2.5).abs() < 1e-9);
    assert!((f(&v["geometry"]["L"]) - 2.58199).abs() < 1e-5);
    assert!((f(&v["geometry"]["norm_a2"]) - 1.5).abs() < 1e-12);
}

#[test]
fn diagram_csv_and_svg() {
    let out = bcv(&["diagram", "--r", "3", "--res", "7", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "m,l,code,case");
    assert_eq!(lines.len(), 1 + 49);
    assert!(lines.iter().all(|l| l.split(',').count() == 4));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.svg");
    let p = path.to_str().unwrap();
    let out = bcv(&["diagram", "--r", "5", "--res", "20", "--format", "svg", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("id=\"parabola-space-form\""));
    assert!(svg.contains("id=\"parabola-flat-horizontal\""));
    assert!(svg.contains("id=\"legend\""));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[grid]\nr = 4\nresolution = 5\nl_range = [0.0, 2.0]\nm_range = [-1.0, 1.0]\n\n[output]\nformat = \"csv\"\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();

    let text = String::from_utf8(bcv(&["--config", c, "diagram"]).stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 25);
    assert!(text.lines().nth(1).unwrap().starts_with("-1,0,"));

    let text = String::from_utf8(bcv(&["--config", c, "diagram", "--res", "3"]).stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 9);

    let out = bcv(&["--config", c, "diagram", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["r"], 4);
    assert_eq!(v["l_values"].as_array().unwrap().len(), 5);

    std::fs::write(&cfg, "[grid]\nresolution = 1\n").unwrap();
    assert_eq!(bcv(&["--config", c, "diagram"]).status.code(), Some(1));
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(bcv(&["--config", c, "diagram"]).status.code(), Some(1));
    let missing = dir.path().join("nope.toml");
    assert_eq!(bcv(&["--config", missing.to_str().unwrap(), "diagram"]).status.code(), Some(1));
}
