use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatcorner")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("heatcorner-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn coeff_values(args: &[&str], kind: &str) -> Vec<f64> {
    let mut full = vec!["coeffs", "--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = rows.as_array().unwrap().iter().find(|r| r["kind"] == kind).expect("row present");
    row["values"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect()
}

#[test]
fn coefficient_examples() {
    assert_eq!(coeff_values(&["--k", "2", "--K0", "1", "--lapK", "0"], "corner_c"), [0.0625, 0.03125, 0.015625]);
    assert_eq!(coeff_values(&["--phi", "pi", "--K0", "1", "--lapK", "0"], "rotation_b"), [0.25, 0.125, 0.0625]);
    let c = coeff_values(&["--k", "3", "--K0", "0", "--lapK", "0"], "corner_c");
    assert!((c[0] - 1.0 / 9.0).abs() < 1e-16 && c[1] == 0.0 && c[2] == 0.0);
    let text = String::from_utf8(run(&["coeffs", "--k", "3", "--K0", "0", "--lapK", "0"]).stdout).unwrap();
    assert!(text.contains("(1/9, 0, 0)"), "{text}");
}

#[test]
fn verify_suites_exit_zero() {
    for args in [["verify", "trig", "--kmax", "200"], ["verify", "consistency", "--kmax", "20"]] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn reports_are_byte_identical() {
    let dir = scratch("det");
    let mut texts = Vec::new();
    for i in 0..2 {
        let (csv, json) = (dir.join(format!("{i}.csv")), dir.join(format!("{i}.json")));
        let out = run(&["report", "consistency", "trig", "--kmax", "5", "--csv", "r.csv", "--json", "r.json"].map(
            |a| match a {
                "r.csv" => s(&csv),
                "r.json" => s(&json),
                other => other,
            },
        ));
        assert_eq!(out.status.code(), Some(0));
        texts.push((std::fs::read(&csv).unwrap(), std::fs::read_to_string(&json).unwrap()));
    }
    assert_eq!(texts[0].0, texts[1].0);
    // output paths differ between the two runs, everything else must match
    let strip = |t: &str| {
        t.lines().filter(|l| !l.contains("\"csv\"") && !l.contains("\"json\"")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(strip(&texts[0].1), strip(&texts[1].1));
    let csv = String::from_utf8(texts[0].0.clone()).unwrap();
    assert_eq!(csv.lines().count(), 2 + 2 * 4 + 12);
}

#[test]
fn empty_report_is_header_only() {
    let dir = scratch("empty");
    let csv = dir.join("e.csv");
    let out = run(&["report", "--csv", s(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("# heatcorner checks csv v1"));
    assert_eq!(text.lines().nth(1), Some("suite,name,parameters,measured,target,tolerance,comparison,pass"));
}

#[test]
fn flags_override_config_file() {
    let dir = scratch("cfg");
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"task": {"suite": "consistency", "kmin": 2, "kmax": 4, "jets": 5}, "seed": 3}"#).unwrap();
    let json = dir.join("out.json");
    let out = run(&["report", "--config", s(&cfg), "--kmax", "6", "--json", s(&json)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["config"]["task"]["kmax"], 6);
    assert_eq!(report["config"]["task"]["jets"], 5);
    assert_eq!(report["config"]["seed"], 3);
    let checks = report["suites"][0]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2 * 5);
    assert!(checks.iter().all(|c| c["parameters"].as_str().unwrap().ends_with("jets=5;seed=3")));
}

#[test]
fn configuration_errors_exit_two() {
    let dir = scratch("bad");
    let cfg = dir.join("bad.json");
    std::fs::write(&cfg, "{\"task\": {\"kmax\": 4,\n \"bogus\": 1}}").unwrap();
    let out = run(&["verify", "consistency", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bogus") && err.contains("line 2"), "{err}");

    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "consistency", "--tol", "no_such_tol=1"]).status.code(), Some(2));
}
