use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dgcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgcat")).args(args).output().expect("run dgcat")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

const DUAL_NUMBERS: &str = r#"{
    "field": "Q",
    "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 0}],
    "unit": [[0, "1"]],
    "mult": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"]],
    "diff": []
}"#;

/// ∂x = y and ∂y = x, so ∂² ≠ 0.
const BROKEN: &str = r#"{
    "field": "Q",
    "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 1}, {"name": "y", "degree": 2}],
    "unit": [[0, "1"]],
    "mult": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"], [0, 2, 2, "1"], [2, 0, 2, "1"]],
    "diff": [[1, 2, "1"], [2, 1, "1"]]
}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn check_passes_on_dual_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "dual.json", DUAL_NUMBERS);
    let o = dgcat(&["check", &f]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("ok   algebra A"));
}

#[test]
fn check_fails_with_witness_when_differential_does_not_square_to_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "broken.json", BROKEN);
    let o = dgcat(&["check", "--json", &f]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["passed"], false);
    let violations = v["objects"][0]["violations"].as_array().unwrap();
    assert!(!violations.is_empty());
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", "{\"field\": \"Q\"");
    assert_eq!(code(&dgcat(&["check", &f])), 2);
    let g = write(dir.path(), "range.json", r#"{"field": "Q", "basis": [{"name": "1", "degree": 0}], "unit": [[5, "1"]]}"#);
    assert_eq!(code(&dgcat(&["check", &g])), 2);
    assert_eq!(code(&dgcat(&["check", dir.path().join("missing.json").to_str().unwrap()])), 2);
    assert_eq!(code(&dgcat(&["compute", "internal-end", "--algebra", "nonsense"])), 2);
}

#[test]
fn exported_zigzag_bundle_checks() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("z2.json");
    let o = dgcat(&["export", "zigzag:2", "-o", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = dgcat(&["check", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn export_is_canonical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dgcat(&["export", "ks", "--n", "2", "--word", "1 -1"]);
    assert_eq!(code(&a), 0);
    let f = write(dir.path(), "ks.json", &stdout(&a));
    let o = dgcat(&["check", &f]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let listed = dgcat(&["list", "--json", &f]);
    assert_eq!(json(&listed)["complexes"][0], "ks");
}

#[test]
fn braid_equivalence_writes_a_certificate_that_rechecks() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let o = dgcat(&[
        "compute", "braid-equiv", "--n", "2", "--lhs", "1 2 1", "--rhs", "2 1 2", "--json",
        "--certificate-out", cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["verdict"], "Equivalent");
    assert_eq!(v["seed"], 0);
    let o = dgcat(&["check", "--json", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let objects = json(&o)["objects"].as_array().unwrap().clone();
    assert!(objects.iter().any(|x| x["kind"] == "certificate" && x["passed"] == true));
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let o = dgcat(&["compute", "reduce", "--n", "2", "--word", "1", "--certificate-out", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let f = &mut doc["certificates"]["reduction"]["f"]["entries"];
    let first = f.as_array_mut().unwrap().first_mut().unwrap();
    first[2] = Value::String("7".into());
    std::fs::write(&cert, serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(code(&dgcat(&["check", cert.to_str().unwrap()])), 1);
}

#[test]
fn reduce_braid_and_inverse_to_one_term() {
    let o = dgcat(&["compute", "reduce", "--n", "2", "--word", "1 -1", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["reduced"]["summands"], 1);
    assert_eq!(v["reduced"]["dimension"], 6);
    assert_eq!(v["certificate_verified"], true);
}

#[test]
fn internal_end_of_acyclic_dual_numbers() {
    let o = dgcat(&["compute", "internal-end", "--algebra", "D", "--module", "regular", "--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["dimension"], 4);
    assert_eq!(v["graded_dimension"], v["expected_graded_dimension"]);
    assert_eq!(v["multiplication_is_composition"], true);
}

#[test]
fn internal_hom_and_tensor_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("r.json");
    assert_eq!(code(&dgcat(&["export", "R'", "-o", f.to_str().unwrap()])), 0);
    let o = dgcat(&["compute", "--input", f.to_str().unwrap(), "tensor", "--left", "M'", "--right", "M'", "--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["dimension"], 2);
    assert_eq!(v["graded_dimension"]["-1"], 2);
    let o = dgcat(&["compute", "internal-hom", "--algebra", "dual", "--target-algebra", "D", "--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(json(&o)["dimension"], 4);
}

#[test]
fn morita_verdicts() {
    for v in ["k2", "two-term", "two-term-iso"] {
        let o = dgcat(&["compute", "morita", "--space", v, "--json"]);
        assert_eq!(code(&o), 0);
        assert_eq!(json(&o)["verdict"], "equivalent");
        assert_eq!(json(&o)["witnesses_verified"], true);
    }
    let o = dgcat(&["compute", "morita", "--space", "two-term-iso", "--json"]);
    assert_eq!(json(&o)["a_acyclic"], true);
}

#[test]
fn ideal_probe_reports() {
    let o = dgcat(&["compute", "ideal-probe", "--algebra", "dual", "--no-generators", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "ProperIdeal");
    let o = dgcat(&["compute", "ideal-probe", "--algebra", "k", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "NoProperIdealFound");
    let o = dgcat(&["compute", "ideal-probe", "--algebra", "k", "--budget", "0", "--json"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn cohomology_of_acyclic_dual_numbers_vanishes() {
    let o = dgcat(&["compute", "cohomology", "--algebra", "D", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["cohomology"], serde_json::json!({}));
    assert_eq!(v["end_cohomology"], serde_json::json!({}));
    let o = dgcat(&["compute", "cohomology", "--algebra", "dual:1", "--json"]);
    assert_eq!(json(&o)["cohomology"], serde_json::json!({"0": 1, "1": 1}));
}

#[test]
fn runs_are_deterministic_for_a_fixed_seed() {
    let args = ["compute", "braid-equiv", "--n", "2", "--lhs", "1 -1", "--rhs", "", "--seed", "5", "--json"];
    assert_eq!(stdout(&dgcat(&args)), stdout(&dgcat(&args)));
    assert_eq!(json(&dgcat(&args))["seed"], 5);
}

#[test]
fn prime_fields_are_accepted() {
    let o = dgcat(&["compute", "internal-end", "--algebra", "dual", "--field", "F3", "--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(code(&dgcat(&["compute", "internal-end", "--algebra", "dual", "--field", "F4"])), 2);
}
