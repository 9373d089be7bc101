//! End-to-end CLI tests: golden outputs, determinism, exit codes, schema
//! validation of every JSON report shape, and the precision override.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stieltjes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stieltjes"))
        .args(args)
        .env(key, val)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn gen_catalan_matches_golden_csv() {
    let out = run(&["gen", "--family", "catalan", "--n", "5"]);
    assert!(out.status.success());
    assert_eq!(
        stdout_str(&out),
        "n,numerator,denominator\n0,1,1\n1,1,1\n2,2,1\n3,5,1\n4,14,1\n5,42,1\n"
    );
}

#[test]
fn classify_reports_verdict_and_citation() {
    let out = run(&["classify", "--family", "double-factorial", "--c", "2.5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["verdict"], "S-indet");
    assert_eq!(v["citation"], "Theorem 3(b)");
}

#[test]
fn classify_handles_exact_boundary_fractions() {
    let out = run(&["classify", "--family", "k-factorial", "--k", "3", "--c", "2/3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["verdict"], "S-det");
    let out = run(&["classify", "--family", "gamma-power", "--a", "4", "--c", "1/2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["verdict"], "S-det-conjectured");
    assert_eq!(v["citation"], "Conjecture 2(b)");
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "probe",
        "--family",
        "catalan",
        "--c-grid",
        "0.5,0.25",
        "--order",
        "6",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_failure_exits_2() {
    let out = run(&["no-such-subcommand"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn computation_failure_exits_1_with_structured_error() {
    let out = run(&["gen", "--family", "unobtainium"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(v["error"].as_str().unwrap().contains("unobtainium"));
}

#[test]
fn mellin_refusal_is_a_structured_error_with_citation() {
    let out = run(&["mellin", "--family", "even-factorial", "--c", "1.5", "--s-max", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(v["error"].as_str().unwrap().contains("Theorem 4(c)"));
    // the uncertified flag overrides
    let out = run(&[
        "mellin",
        "--family",
        "even-factorial",
        "--c",
        "1.5",
        "--s-max",
        "1",
        "--uncertified",
    ]);
    assert!(out.status.success());
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("stieltjes-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("seq.csv");
    let out = run(&[
        "gen",
        "--family",
        "factorial",
        "--n",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(body, "n,numerator,denominator\n0,1,1\n1,1,1\n2,2,1\n3,6,1\n");
}

#[test]
fn precision_env_var_sets_default() {
    let out = run_env(
        &["probe", "--family", "catalan", "--c-grid", "0.5", "--order", "4"],
        "STIELTJES_PRECISION",
        "320",
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["precision_bits"], 320);
}

#[test]
fn json_outputs_validate_against_published_schema() {
    let schema_src =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../schemas/report.schema.json"))
            .expect("schema file ships in the repo");
    let schema: serde_json::Value = serde_json::from_str(&schema_src).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");

    let invocations: Vec<Vec<&str>> = vec![
        vec!["gen", "--family", "catalan", "--n", "4", "--format", "json"],
        vec!["gen", "--family", "gamma-power", "--a", "1/2", "--n", "3", "--format", "json"],
        vec!["hankel", "--family", "catalan", "--order", "4"],
        vec!["hankel", "--family", "catalan", "--order", "4", "--c", "0.5"],
        vec!["probe", "--family", "double-factorial", "--c-grid", "0.5,1.5", "--order", "4"],
        vec!["mellin", "--family", "catalan", "--c", "1", "--s-max", "2", "--s-step", "1"],
        vec!["density", "--model", "catalan-density", "--n-max", "3", "--format", "json"],
        vec!["density", "--model", "symmetric-arcsine", "--n-max", "2", "--format", "json"],
        vec!["carleman", "--family", "factorial", "--c", "3"],
        vec!["bernstein", "--theorem", "t5", "--k", "2", "--n", "20"],
        vec!["classify", "--family", "catalan", "--c", "7.3"],
        vec!["gen", "--family", "nope"],
    ];
    for args in invocations {
        let out = run(&args);
        let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out))
            .unwrap_or_else(|e| panic!("{args:?}: not JSON: {e}"));
        let errors: Vec<String> = validator
            .iter_errors(&doc)
            .map(|e| format!("{e} at {}", e.instance_path()))
            .collect();
        assert!(errors.is_empty(), "{args:?} fails schema: {errors:?}");
    }
}

#[test]
fn verify_all_passes_and_exits_zero() {
    let out = run(&["verify-all"]);
    assert!(out.status.success(), "verify-all failed: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
    // one pass/fail line per criterion on stderr
    let lines = String::from_utf8_lossy(&out.stderr);
    assert_eq!(lines.lines().filter(|l| l.starts_with("PASS")).count(), 10);
}
