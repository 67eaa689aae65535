mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::*;
use serde_json::{json, Value};

fn gaft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaft"))
        .args(args)
        .env_remove("GAFT_BUDGET_SAT")
        .output()
        .unwrap()
}

fn json_out(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_json(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.display().to_string()
}

#[test]
fn construct_free_pointed_set() {
    let cert = json_out(&gaft(&["construct", "--kind", "builtin:pointed", "--generators", "1"]));
    assert_eq!(cert["object"]["carrier"], json!(free_pointed(1).size()));
    assert_eq!(cert["source_kind"], "Pointed");
    assert_eq!(cert["test_family"], "lambda");
}

#[test]
fn labelled_generators_are_kept() {
    let cert = json_out(&gaft(&[
        "construct",
        "--kind",
        "builtin:semilattice",
        "--generators",
        "p,q",
    ]));
    assert_eq!(cert["generators"]["labels"], json!(["p", "q"]));
    assert_eq!(cert["object"]["carrier"], json!(free_semilattice(2).size()));
}

#[test]
fn verify_margin_extends_the_test_family() {
    let cert = json_out(&gaft(&[
        "construct",
        "--kind",
        "builtin:gf2-vector",
        "--generators",
        "2",
        "--verify-margin",
        "4",
    ]));
    assert_eq!(cert["test_family"], "lambda+carrier<=4");
    let entries = cert["verification"].as_array().unwrap();
    assert!(entries.iter().all(|e| e["unique"] == json!(true)));
}

#[test]
fn infinite_bound_exits_two_without_output() {
    let out = gaft(&["construct", "--kind", "builtin:group", "--generators", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).contains("no finite solution set"));
}

#[test]
fn missing_kind_file_exits_one() {
    let out = gaft(&["construct", "--kind", "/nonexistent/k.kind", "--generators", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn parse_failure_is_positioned() {
    let path = fixture("malformed_arity.kind");
    let out = gaft(&["construct", "--kind", path.to_str().unwrap(), "--generators", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("malformed_arity.kind:4:6: arity mismatch"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(gaft(&["construct", "--bogus"]).status.code(), Some(1));
    assert_eq!(gaft(&[]).status.code(), Some(1));
    assert_eq!(gaft(&["--help"]).status.code(), Some(0));
    assert_eq!(gaft(&["construct", "--kind", "builtin:pointed"]).status.code(), Some(1));
    assert_eq!(
        gaft(&["construct", "--kind", "builtin:nothing", "--generators", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn output_paths_must_differ() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("same").display().to_string();
    let out = gaft(&[
        "construct",
        "--kind",
        "builtin:pointed",
        "--generators",
        "1",
        "--out",
        &p,
        "--dot",
        &p,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!Path::new(&p).exists());
}

#[test]
fn dot_diagram_names_the_arrows() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("c.json");
    let dot_path = dir.path().join("c.dot");
    let out = gaft(&[
        "construct",
        "--kind",
        "builtin:mset2",
        "--generators",
        "2",
        "--out",
        out_path.to_str().unwrap(),
        "--dot",
        dot_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let dot = std::fs::read_to_string(dot_path).unwrap();
    for label in [
        "\"\u{3c8}\"",
        "\"\u{3c8}\u{2032}\"",
        "\"i\"",
        "\"\u{3c0}_\u{3c6}\"",
        "\"e_\u{3c6}\"",
    ] {
        assert!(dot.contains(label), "missing {label}");
    }
    assert!(dot.contains(&format!("card {}", free_mset2(2).size())));
}

#[test]
fn abelianization_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let x = write_json(dir.path(), "s3.json", &s3_monoid().to_json());
    let lambda = json!({
        "description": "cyclic of order one and two",
        "members": [cyclic_cmon(1).to_json(), cyclic_cmon(2).to_json()],
    });
    let l = write_json(dir.path(), "lambda.json", &lambda);
    let cert = json_out(&gaft(&[
        "construct",
        "--kind",
        "builtin:commutative-monoid",
        "--kind",
        "builtin:monoid",
        "--functor",
        "inclusion",
        "--object",
        &x,
        "--strategy",
        "solset",
        &l,
    ]));
    assert_eq!(cert["object"]["carrier"], json!(abelianization(&s3_monoid()).size()));
    assert_eq!(
        cert["lambda"]["strategy"]["user_supplied"],
        "cyclic of order one and two"
    );
}

#[test]
fn failed_verification_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let trivial = json!({"kind": "Group", "carrier": 1, "tables": {"unit": 0, "mul": [[0]], "inv": [0]}});
    let l = write_json(dir.path(), "lambda.json", &json!([trivial]));
    let out = gaft(&[
        "construct",
        "--kind",
        "builtin:group",
        "--generators",
        "1",
        "--strategy",
        "solset",
        &l,
        "--verify-margin",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).contains("FAIL existence"));
}

#[test]
fn saturation_budget_from_flag_and_env() {
    let args = ["construct", "--kind", "builtin:semilattice", "--generators", "3"];
    let mut with_flag = args.to_vec();
    with_flag.extend(["--budget-sat", "4"]);
    assert_eq!(gaft(&with_flag).status.code(), Some(4));
    let out = Command::new(env!("CARGO_BIN_EXE_gaft"))
        .args(args)
        .env("GAFT_BUDGET_SAT", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(out.stdout.is_empty());
}

#[test]
fn check_builtin_kind_passes() {
    let v = json_out(&gaft(&["check", "--kind", "builtin:pointed", "--max-card", "3"]));
    assert_eq!(v["passed"], json!(true));
    assert_eq!(v["violations"], json!(0));
    let titles: Vec<&str> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["title"].as_str().unwrap())
        .collect();
    assert!(titles.iter().any(|t| t.starts_with("adjunction laws")));
    assert!(titles.iter().any(|t| t.starts_with("solution set")));
}

#[test]
fn check_broken_kind_exits_three_with_witness() {
    let path = fixture("broken_semilattice.kind");
    let out = gaft(&["check", "--kind", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    let err = stderr(&out);
    assert!(err.contains("FAIL S3"), "{err}");
    assert!(err.contains("kappa(2) = 3"), "{err}");
}

#[test]
fn check_without_kinds_exits_one() {
    assert_eq!(gaft(&["check"]).status.code(), Some(1));
}

#[test]
fn enumerate_lists_classes() {
    let v = json_out(&gaft(&["enumerate", "--kind", "builtin:pointed", "--max-card", "2"]));
    assert_eq!(v["count"], json!(2));
    let v = json_out(&gaft(&["enumerate", "--kind", "builtin:pointed", "--max-card", "0"]));
    assert_eq!(v["count"], json!(0));
    let v = json_out(&gaft(&[
        "enumerate",
        "--kind",
        "builtin:semilattice",
        "--max-card",
        "4",
    ]));
    assert_eq!(v["count"], json!(1 + 1 + 2 + 5));
}

#[test]
fn enumerate_homs_between_chains() {
    let dir = tempfile::tempdir().unwrap();
    let chain = gaft::engine::Structure::new(
        gaft::kinds::semilattice(),
        gaft::finset::FinSet::new(2),
        vec![vec![0, 1, 1, 1]],
    )
    .unwrap();
    let p = write_json(dir.path(), "chain.json", &chain.to_json());
    let v = json_out(&gaft(&[
        "enumerate",
        "--kind",
        "builtin:semilattice",
        "--hom-from",
        &p,
        "--hom-to",
        &p,
    ]));
    let expected = brute_homs(&chain, &chain);
    assert_eq!(v["count"], json!(expected.len()));
    assert_eq!(v["homs"], json!(expected));
}

#[test]
fn enumerate_over_budget_exits_four() {
    let out = gaft(&["enumerate", "--kind", "builtin:group", "--max-card", "9"]);
    assert_eq!(out.status.code(), Some(4));
    let out = gaft(&[
        "enumerate",
        "--kind",
        "builtin:group",
        "--max-card",
        "3",
        "--budget-enum",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(out.stdout.is_empty());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "construct",
        "--kind",
        "builtin:bounded-semilattice",
        "--generators",
        "2",
        "--verify-margin",
        "3",
    ];
    assert_eq!(gaft(&args).stdout, gaft(&args).stdout);
    let args = ["check", "--kind", "builtin:gf2-vector", "--seed", "11"];
    let a = gaft(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, gaft(&args).stdout);
}
