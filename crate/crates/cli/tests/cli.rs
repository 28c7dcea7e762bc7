use std::process::Command;

use gradsym_cli::run_with;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

fn assert_no_floats(v: &Value) {
    match v {
        Value::Number(n) => assert!(!n.is_f64(), "floating point value {n}"),
        Value::Array(a) => a.iter().for_each(assert_no_floats),
        Value::Object(o) => o.values().for_each(assert_no_floats),
        _ => {}
    }
}

#[test]
fn conformal_orthogonal_symmetries() {
    let (code, v) = run_json(&[
        "symmetries", "--family", "conformal", "--p", "2", "--q", "1", "--group", "O", "--format", "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "Symmetric");
    let sols = v["g0_solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 2);
    assert_eq!(sols[0].as_array().unwrap().len(), 5);
    assert_eq!(v["kernel"].as_array().unwrap().len(), 2);
    assert_no_floats(&v);
}

#[test]
fn projective_cohomology_has_weyl_part() {
    let (code, v) = run_json(&["cohomology", "--family", "projective", "--m", "3", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["h2_by_degree"]["2"], 15);
    assert_eq!(v["classification"], "Interesting_Degree2");
    assert_no_floats(&v);
}

#[test]
fn projective_gate_vanishes() {
    let (code, v) = run_json(&["gate", "--family", "projective", "--m", "3", "--Z", "e1", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "CurvatureVanishes");
    assert_eq!(v["witness_source"]["kind"], "dual");
    assert_eq!(v["joint_solution_dim"], 0);
    // rationals travel as strings
    assert!(v["eigenvalues"].as_array().unwrap().iter().all(Value::is_string));
    assert_no_floats(&v);
}

#[test]
fn grassmannian_rank_one_is_inconclusive() {
    let (code, v) = run_json(&[
        "gate", "--family", "grassmannian", "--p", "2", "--q", "3", "--Z", "b1", "--format", "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "Inconclusive");
    assert_eq!(v["Z_rank"], 1);
    let (_, v) = run_json(&[
        "gate", "--family", "grassmannian", "--p", "2", "--q", "3", "--Z", "b1+b5", "--format", "json",
    ]);
    assert_eq!(v["verdict"], "CurvatureVanishes");
    assert_eq!(v["Z_rank"], 2);
}

#[test]
fn gate_accepts_matrix_literal() {
    let (code, v) = run_json(&[
        "gate", "--family", "projective", "--m", "2", "--Z", "[[0,1,0],[0,0,0],[0,0,0]]", "--format", "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "CurvatureVanishes");
}

#[test]
fn json_output_is_stable() {
    let args = ["gate", "--family", "conformal", "--p", "2", "--q", "2", "--Z", "b1+b4", "--seed", "5", "--format", "json"];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["verdict"], "Inconclusive");
}

#[test]
fn small_budget_marks_skipped_rows() {
    let (code, v) = run_json(&["verify-all", "--budget", "m=2,pq=3,h=1", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["status"] == "Skipped"));
    assert!(checks.iter().all(|c| c["status"] != "Fail"));
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
    assert_eq!(v["command"][0], "verify-all");
}

#[test]
fn catalog_lists_budget() {
    let (code, v) = run_json(&["catalog", "--budget", "m=3,pq=4,h=1", "--format", "json"]);
    assert_eq!(code, 0);
    let models = v["models"].as_array().unwrap();
    // projective 2, 3; conformal (3,0) (2,1) (4,0) (3,1) (2,2); grassmannian (2,2); quaternionic 1
    assert_eq!(models.len(), 9);
    assert!(models.iter().all(|m| m["structure_ok"] == true));
    let (code, out, _) = run(&["catalog", "--budget", "m=2,pq=3,h=1"]);
    assert_eq!(code, 0);
    assert!(out.contains("projective(m=2)"));
}

#[test]
fn text_reports() {
    let (code, out, err) = run(&["cohomology", "--family", "conformal", "--p", "3", "--q", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("classification: Interesting_Degree2"), "{out}");
    assert!(err.contains("wall-time"));
    let (code, out, _) = run(&["symmetries", "--family", "projective", "--m", "3", "--group", "Sl"]);
    assert_eq!(code, 0);
    assert!(out.contains("NotSymmetric"), "{out}");
    let (code, out, _) = run(&["gate", "--family", "projective", "--m", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("CurvatureVanishes"), "{out}");
}

#[test]
fn flag_errors_exit_two() {
    for args in [
        &["verify-all", "--budget", "m=two"][..],
        &["verify-all", "--budget", "x=1"],
        &["bogus"],
        &["cohomology", "--family", "hyperbolic", "--m", "2"],
        &["cohomology", "--family", "projective"],
        &["cohomology", "--family", "projective", "--m", "1"],
        &["cohomology", "--family", "projective", "--m", "2", "--p", "1"],
        &["symmetries", "--family", "projective", "--m", "2", "--group", "O"],
        &["gate", "--family", "projective", "--m", "2", "--Z", "e9"],
        &["gate", "--family", "projective", "--m", "2", "--Z", "[[1,0,0],[0,-1,0],[0,0,0]]"],
        &["gate", "--family", "projective", "--m", "2", "--Z", "b1-b1"],
        &["gate", "--family", "projective", "--m", "2", "--format", "yaml"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify-all"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_gradsym");
    let st = Command::new(bin)
        .args(["gate", "--family", "projective", "--m", "3", "--Z", "e1", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&st.stdout).unwrap();
    assert_eq!(v["verdict"], "CurvatureVanishes");
    let st = Command::new(bin).args(["verify-all", "--budget", "m"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
}
