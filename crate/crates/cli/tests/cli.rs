use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quartic-lines"))
        .args(args)
        .env_remove("QUARTIC_LINES_CHECKPOINT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).expect("json output")
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).expect("golden file")
}

#[test]
fn bnd_of_a11_eta_is_twenty() {
    assert_eq!(stdout(&["bnd", "--lattice", "A11", "--class", "eta"]), "20\n");
    assert_eq!(stdout(&["bnd", "--series", "T"]), "20\n");
}

#[test]
fn d4_lambda_has_eight_vectors() {
    let v = json(&["vec", "--lattice", "D4", "--class", "lambda"]);
    assert_eq!(v["count"], 8);
    assert_eq!(v["vectors"].as_array().unwrap().len(), 8);
    assert_eq!(v["norm"], "-1");
}

#[test]
fn report_table_one_bound_column() {
    let csv = stdout(&["report", "--table", "1"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 5);
    let header: Vec<&str> = lines[0].split(',').collect();
    let col = header.iter().position(|&h| h == "bound").unwrap();
    let bounds: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(col).unwrap()).collect();
    assert_eq!(bounds, ["20↦32", "16↦20", "13↦14", "16↦16"]);
    assert!(lines[1..].iter().all(|l| !l.contains("false")));
}

#[test]
fn report_table_three_flags_the_open_cell() {
    let v = json(&["report", "--table", "3", "--format", "json"]);
    let rows = v["rows"].as_array().unwrap();
    let two_x9 = rows.iter().find(|r| r["label"] == "2X_9+Δ").unwrap();
    let e = two_x9["cells"].as_array().unwrap().iter().find(|c| c["column"] == "E").unwrap();
    assert_eq!(e["matches_paper"], false);
    assert!(e["note"].is_string());
}

#[test]
fn golden_outputs_are_byte_exact() {
    let cases: [(&str, &[&str]); 6] = [
        ("lattice_a2.json", &["lattice", "A2"]),
        ("vec_a1d1_eta.json", &["vec", "--lattice", "A1+D1", "--class", "eta", "--pairs"]),
        ("report_table1.json", &["report", "--table", "1", "--format", "json"]),
        ("tseries_v17.json", &["tseries", "--config", "V17", "--analyze", "--format", "json"]),
        ("elkies_t.json", &["elkies", "--series", "T", "--format", "json"]),
        ("betti_2x9.json", &["betti", "--label", "X9", "--label", "X9", "--irregularity", "1", "--format", "json"]),
    ];
    for (file, args) in cases {
        assert_eq!(stdout(args), golden(file), "{file}");
    }
}

#[test]
fn torus_realization_of_v19_is_certified() {
    let v = json(&["tseries", "--config", "V19", "--realize", "--group", "torus", "--max-modulus", "60", "--format", "json"]);
    let report = &v["realizability"][0];
    assert_eq!(report["verdict"], "possible");
    let sol = &report["solution"];
    assert!(sol["modulus"].as_u64().unwrap() <= 60);
    let points = sol["points"].as_array().unwrap();
    assert_eq!(points.len(), 12);
    assert!(points.iter().all(|p| p.as_array().unwrap().len() == 2));
}

#[test]
fn exhausted_range_is_reported() {
    let text = stdout(&["tseries", "--config", "V19", "--realize", "--group", "torus", "--max-modulus", "3"]);
    assert!(text.contains("no solution with modulus 2..=3"), "{text}");
}

#[test]
fn elkies_raw_triple_and_series() {
    assert_eq!(stdout(&["elkies", "--n", "12", "--tau1", "1/9", "--tau2", "-1/3"]), "25 (128/5)\n");
    assert_eq!(stdout(&["elkies", "--series", "X"]), "22\n");
    assert_eq!(stdout(&["elkies", "--case", "2J_10"]), "3\n");
}

#[test]
fn betti_with_repeated_labels() {
    assert_eq!(stdout(&["betti", "--label", "P8"]), "13\n");
    assert_eq!(stdout(&["betti", "--label", "J10", "--label", "J10", "--irregularity", "1"]), "4\n");
}

#[test]
fn dot_export_of_a_witness() {
    let dot = stdout(&["bnd", "--lattice", "E8", "--class", "zero", "--format", "dot"]);
    assert!(dot.starts_with("graph"));
    assert_eq!(dot.matches(" -- ").count(), 12);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["frobnicate"][..],
        &["vec", "--lattice", "Q7"],
        &["vec"],
        &["report", "--table", "2"],
        &["vec", "--lattice", "A2", "--format", "dot"],
        &["regress", "--criterion", "12"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn regress_passes_fast_criteria_and_keeps_open_questions() {
    let out = run(&["regress", "--criterion", "3", "--criterion", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = v[0]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["open_question"].is_string()));
}

#[test]
fn regress_mismatch_exits_with_one_and_a_diff() {
    let out = run(&["regress", "--criterion", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL") && text.contains("expected"), "{text}");
}

fn manifest_without_timings(path: &PathBuf) -> Value {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn manifest_is_reproducible() {
    let path = std::env::temp_dir().join(format!("quartic-lines-manifest-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    stdout(&["report", "--table", "1", "--manifest", p]);
    let first = manifest_without_timings(&path);
    stdout(&["report", "--table", "1", "--manifest", p]);
    let second = manifest_without_timings(&path);
    std::fs::remove_file(&path).ok();
    assert_eq!(first, second);
    assert_eq!(first["matches_paper"], true);
    assert_eq!(first["outputs"]["rows"].as_array().unwrap().len(), 4);
    assert!(first["versions"]["quartic-lines"].is_string());
}
