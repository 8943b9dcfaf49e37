use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sextic-strata"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sextic-strata-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// `[[Y^4, X], [-X^5, Y^2]]` over F_101 with twists `(-4, -1) -> (0, 1)`.
const X5_FILE: &str = r#"{
  "format_version": 1,
  "field": { "kind": "prime", "p": 101 },
  "source_twists": [-4, -1],
  "target_twists": [0, 1],
  "matrix": [
    [[[1, 0, 4, 0]], [[1, 1, 0, 0]]],
    [[[100, 5, 0, 0]], [[1, 0, 2, 0]]]
  ]
}"#;

#[test]
fn sampled_x5_classifies_with_its_profile() {
    let path = scratch("x5.json");
    let out = run(&["sample", "--stratum", "X5", "--seed", "17", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let out = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["report"]["label"], "X5");
    assert_eq!(v["report"]["profile"], serde_json::json!([1, 3, 4, 1]));
}

#[test]
fn sample_is_reproducible() {
    let a = run(&["sample", "--stratum", "X4", "--seed", "5"]);
    let b = run(&["sample", "--stratum", "X4", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn det_of_a_hand_written_file() {
    let path = scratch("hand.json");
    std::fs::write(&path, X5_FILE).unwrap();
    let out = run(&["det", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["det"], "X^6 + Y^6");
    assert_eq!(v["report"]["degree"], 6);
}

#[test]
fn window_endpoints_on_a_coarse_grid() {
    let out = run(&["kron", "window", "--grid", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["six"]["endpoints"], serde_json::json!([26, 49]));
}

#[test]
fn dual_of_a_sample_leaves_the_table() {
    let path = scratch("x3.json");
    let dual = scratch("x3_dual.json");
    assert!(run(&["sample", "--stratum", "X3", "--seed", "2", "--out", path.to_str().unwrap()])
        .status
        .success());
    assert!(run(&["dual", path.to_str().unwrap(), "--out", dual.to_str().unwrap()])
        .status
        .success());
    let out = run(&["classify", dual.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["report"]["hilbert"], serde_json::json!([6, 5]));
}

#[test]
fn cohomology_table_has_one_row_per_twist() {
    let path = scratch("coh.json");
    std::fs::write(&path, X5_FILE).unwrap();
    let out = run(&["cohomology", path.to_str().unwrap(), "--tmin", "-2", "--tmax", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["report"]["table"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let t = row["t"].as_i64().unwrap();
        assert_eq!(row["chi"].as_i64().unwrap(), 6 * t + 1);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["classify", "/nonexistent/file.json"]).status.code(), Some(1));
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{").unwrap();
    assert_eq!(run(&["classify", bad.to_str().unwrap()]).status.code(), Some(1));
    // Exact search over F_101 is far beyond the lattice budget.
    let x0 = scratch("x0.json");
    assert!(run(&["sample", "--stratum", "X0", "--out", x0.to_str().unwrap()]).status.success());
    let out = run(&["kron", "check", x0.to_str().unwrap(), "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(3));
    let out = bin()
        .args(["kron", "window", "--grid", "10"])
        .env("SEXTIC_STRATA_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_dims_suite_passes() {
    let out = run(&["verify", "--suite", "dims"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["passed"], true);
    assert_eq!(v["report"]["criteria"].as_array().unwrap().len(), 2);
}

#[test]
fn human_output_is_plain_text() {
    let out = run(&["--human", "kron", "window", "--grid", "100"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("26/100 .. 49/100"));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}
