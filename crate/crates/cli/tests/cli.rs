//! End-to-end checks of the command-line interface: golden JSON outputs
//! (volatile fields stripped), exit codes, and reproducibility.

use std::process::{Command, Output};

use serde_json::Value;

fn ffmoments(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffmoments"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    let mut v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    if let Some(obj) = v.as_object_mut() {
        obj.remove("elapsed_s");
    }
    v
}

#[test]
fn moments_exact_golden() {
    for engine in ["bruteforce", "typewise", "series"] {
        let out = ffmoments(&[
            "moments", "exact", "--engine", engine, "--q", "3", "--N", "2", "--k", "2",
        ]);
        assert!(out.status.success());
        let v = json_stdout(&out);
        assert_eq!(v["value"], "189");
        assert_eq!(v["engine"], engine);
        assert_eq!(v["schema_version"], 1);
    }
}

#[test]
fn magic_count_golden() {
    let out = ffmoments(&["magic", "count", "-k", "2", "-N", "7"]);
    assert!(out.status.success());
    assert_eq!(json_stdout(&out)["value"], "8");
}

#[test]
fn magic_enum_lists_permutation_matrices() {
    let out = ffmoments(&["magic", "enum", "-k", "2", "-N", "1"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["count"], 2);
    assert_eq!(
        v["squares"],
        serde_json::json!([[[0, 1], [1, 0]], [[1, 0], [0, 1]]])
    );
}

#[test]
fn bk_matches_closed_form() {
    let out = ffmoments(&["bk", "--q", "2", "--k", "2"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    let value = v["value"].as_f64().unwrap();
    let bound = v["error_bound"].as_f64().unwrap();
    assert!((value - 0.5).abs() <= bound.max(1e-10));
}

#[test]
fn series_check_b_passes() {
    for q in ["2", "3"] {
        let out = ffmoments(&["series", "check-b", "--q", q, "--k", "2", "--cap", "4"]);
        assert!(out.status.success());
        assert_eq!(json_stdout(&out)["passed"], true);
    }
}

#[test]
fn coprime_methods_agree() {
    for (q, n) in [("2", "2"), ("3", "1")] {
        let brute = ffmoments(&["coprime", "pairs", "--q", q, "--N", n, "--method", "brute"]);
        let closed = ffmoments(&["coprime", "pairs", "--q", q, "--N", n, "--method", "closed"]);
        assert_eq!(json_stdout(&brute)["value"], json_stdout(&closed)["value"]);
    }
}

#[test]
fn gcdmatrix_decompose_golden() {
    let out = ffmoments(&[
        "gcdmatrix",
        "decompose",
        "--q",
        "2",
        "--fs",
        "0,1;1,1",
        "--gs",
        "1,1;0,1",
    ]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(
        v["entries"],
        serde_json::json!([["1", "0,1"], ["1,1", "1"]])
    );
    assert_eq!(v["degree_matrix"], serde_json::json!([[0, 1], [1, 0]]));
}

#[test]
fn mc_is_reproducible() {
    let args = [
        "moments", "mc", "--q", "2", "--N", "2", "--k", "1", "--trials", "500", "--seed", "7",
    ];
    let a = ffmoments(&args);
    let b = ffmoments(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_output_has_header_and_row() {
    let out = ffmoments(&[
        "magic", "count", "-k", "3", "-N", "2", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].split(',').any(|h| h == "value"));
    assert!(lines[1].split(',').any(|c| c == "21"));
}

#[test]
fn usage_error_exits_2() {
    let out = ffmoments(&["moments", "exact", "--engine", "nope", "--q", "2", "--N", "1", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_error_exits_1() {
    let out = ffmoments(&[
        "moments",
        "exact",
        "--engine",
        "bruteforce",
        "--q",
        "2",
        "--N",
        "10",
        "--k",
        "3",
        "--budget",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("budget"));
}

#[test]
fn verify_fast_passes_and_reports() {
    let out = ffmoments(&["verify", "fast"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["passed"], true);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.lines().filter(|l| l.starts_with("[PASS]")).count() >= 8);
}
