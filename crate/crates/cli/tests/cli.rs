use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn mlcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlcalc")).args(args).output().expect("spawn mlcalc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

/// Parsed CSV rows keyed by the header.
fn csv_rows(o: &Output) -> Vec<std::collections::HashMap<String, String>> {
    let text = stdout(o);
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    lines.map(|l| header.iter().cloned().zip(l.split(',').map(String::from)).collect()).collect()
}

fn num(row: &std::collections::HashMap<String, String>, key: &str) -> f64 {
    row[key].parse().unwrap_or_else(|_| panic!("{key} = '{}'", row[key]))
}

fn write_op(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn gaussian_ml_eval_is_exp() {
    let o = mlcalc(&["--beta", "1", "ml-eval", "--grid=-2:2:9", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 9);
    for r in rows {
        let x = num(&r, "z_re");
        assert!((num(&r, "ml_re") - x.exp()).abs() <= 1e-12 * x.exp().max(1.0));
    }
}

#[test]
fn empty_grid_gives_empty_table() {
    let o = mlcalc(&["ml-eval", "--grid", "0:1:0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
    let o = mlcalc(&["ml-eval", "--grid", "0:1:0"]);
    assert_eq!(json(&o)["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn out_of_range_is_a_domain_error() {
    let o = mlcalc(&["--beta", "0.25", "ml-eval", "--z", "200"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("did not converge"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(mlcalc(&["--beta", "1.5", "sample"]).status.code(), Some(2));
    assert_eq!(mlcalc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mlcalc(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(mlcalc(&["--trunc", "50", "verify", "--suite", "appell"]).status.code(), Some(2));
}

#[test]
fn hermite_limit_verifies() {
    let o = mlcalc(&["--beta", "1", "--dim", "1", "--deterministic", "verify", "--suite", "appell"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["suite"], "appell");
    assert!(r.get("timestamp").is_none());
    for c in r["checks"].as_array().unwrap() {
        assert!(c["status"] == "pass" || c["status"] == "reported", "{c}");
        assert!(c["reference"].as_str().is_some_and(|s| !s.is_empty()));
    }
}

#[test]
fn small_mc_run_is_underpowered_not_failed() {
    let o = mlcalc(&["--samples", "10", "verify", "--suite", "mc"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("underpowered"));
    let r = json(&o);
    assert!(r["timestamp"].is_u64());
    assert!(r["checks"].as_array().unwrap().iter().any(|c| c["status"] == "underpowered"));
}

#[test]
fn bounds_are_reported_never_failed() {
    let o = mlcalc(&["verify", "--suite", "bounds"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["status"] == "reported"));
    assert_eq!(r["bound_tables"].as_array().unwrap().len(), 9);
}

#[test]
fn fixed_seed_output_is_byte_identical() {
    let args = ["--deterministic", "--samples", "20000", "verify", "--suite", "mehler"];
    let a = mlcalc(&args);
    let b = mlcalc(&[&["--threads", "1"], &args[..]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let s1 = mlcalc(&["--seed", "7", "--samples", "5000", "sample"]);
    let s2 = mlcalc(&["--seed", "7", "--samples", "5000", "--threads", "2", "sample"]);
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn sample_csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let o = mlcalc(&["--dim", "3", "--samples", "4", "--format", "csv", "--out", path.to_str().unwrap(), "sample"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "tau,omega_1,omega_2,omega_3");
    assert_eq!(lines.len(), 5);
}

#[test]
fn identity_symbol_is_exp_pairing() {
    let f = write_op(r#"{"kind": "identity", "params": {"beta": 0.5}, "dim": 2}"#);
    let o = mlcalc(&["--trunc", "14", "symbol-grid", "--op", f.path().to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    for r in csv_rows(&o) {
        assert!((num(&r, "symbol_re") - num(&r, "exp_pairing_re")).abs() < 1e-10);
        assert!((num(&r, "closed_re") - num(&r, "exp_pairing_re")).abs() < 1e-15);
    }
}

#[test]
fn gateaux_ratio_is_pairing_with_direction() {
    let f = write_op(r#"{"kind": "gateaux", "params": {"beta": 0.5}, "dim": 2, "y": [1.0, -0.5]}"#);
    let o = mlcalc(&[
        "--trunc", "14", "symbol-grid", "--op", f.path().to_str().unwrap(), "--format", "csv", "--xi", "0.1,0.05", "--xi",
        "-0.1,0.2", "--eta", "0.05,-0.1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 2);
    for (r, want) in rows.iter().zip([0.1 - 0.025, -0.1 - 0.1]) {
        assert!((num(r, "ratio_re") - want).abs() < 1e-8, "{r:?}");
    }
}

#[test]
fn kernel_ratio_is_matrix_form() {
    let f = write_op(r#"{"kind": "integral_kernel", "params": {"beta": 0.5}, "dim": 2, "matrix": [[1, 2], [0.5, -1]]}"#);
    let o = mlcalc(&["--trunc", "14", "symbol-grid", "--op", f.path().to_str().unwrap(), "--format", "csv", "--xi", "0.1,0.2", "--eta", "0.2,-0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &csv_rows(&o)[0];
    // ⟨ξ, Aη⟩ with Aη = (0, 0.2)
    assert!((num(r, "ratio_re") - 0.04).abs() < 1e-8, "{r:?}");
}

#[test]
fn symbol_outside_domain_exits_two() {
    let f = write_op(r#"{"kind": "identity", "params": {"beta": 0.5}, "dim": 1}"#);
    let o = mlcalc(&["symbol-grid", "--op", f.path().to_str().unwrap(), "--xi", "5", "--eta", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let bad = write_op(r#"{"kind": "warp"}"#);
    assert_eq!(mlcalc(&["symbol-grid", "--op", bad.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn mehler_table() {
    let o = mlcalc(&["--beta", "1", "mehler", "--format", "csv", "--t", "0,0.3,1,2", "--s", "0,0.5,1.5"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| num(r, "defect") < 1e-12));

    let o = mlcalc(&["mehler", "--format", "csv", "--t", "0,0.5", "--s", "0.5"]);
    let rows = csv_rows(&o);
    assert_eq!(num(&rows[0], "defect"), 0.0);
    let d = num(&rows[1], "defect");
    assert!(d > 1e-11);
    assert!((d - num(&rows[1], "baseline_defect")).abs() < 1e-9);
}

#[test]
fn baseline_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let custom = r#"{"beta": 0.5, "q": 1.0, "rows": [{"t": 0.5, "s": 0.5, "defect": 0.125}]}"#;
    std::fs::write(dir.path().join("mehler_baseline.json"), custom).unwrap();
    let run = |dir: &std::path::Path| {
        Command::new(env!("CARGO_BIN_EXE_mlcalc"))
            .env("MLCALC_DATA_DIR", dir)
            .args(["mehler", "--format", "csv", "--t", "0.5", "--s", "0.5"])
            .output()
            .unwrap()
    };
    let o = run(dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(num(&csv_rows(&o)[0], "baseline_defect"), 0.125);
    let empty = tempfile::tempdir().unwrap();
    assert_eq!(run(empty.path()).status.code(), Some(2));
}
