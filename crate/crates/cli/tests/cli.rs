use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abelian"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn code(args: &[&str]) -> Option<i32> {
    run(args).status.code()
}

fn form_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("abelian-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn csv_rows(args: &[&str]) -> Vec<Vec<f64>> {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn reduce_monomials() {
    assert_eq!(
        json(&["reduce", "--monomial", "1", "0"])["petrov"]["p2"],
        serde_json::json!(["2"])
    );
    assert_eq!(
        json(&["reduce", "--monomial", "0", "0"])["petrov"]["p1"],
        serde_json::json!(["1"])
    );
    let v = json(&["reduce", "--monomial", "2", "2"]);
    assert_eq!(v["petrov"]["p1"], serde_json::json!(["0", "-1/3"]));
    assert_eq!(v["degrees"]["p1"], 1);
}

#[test]
fn zero_components_have_null_degree() {
    let v = json(&["reduce", "--monomial", "1", "0"]);
    assert!(v["degrees"]["p1"].is_null());
    assert_eq!(v["petrov"]["p1"], serde_json::json!([]));
}

#[test]
fn reduce_rejects_bad_input() {
    assert_eq!(code(&["reduce", "--monomial", "-1", "0"]), Some(2));
    let bad = form_file("bad.json", r#"{"p": [[0, "x", "1"]]}"#);
    assert_eq!(code(&["reduce", "--form", bad.to_str().unwrap()]), Some(2));
    let zero_den = form_file("zden.json", r#"{"q": [[1, 0, "1/0"]]}"#);
    assert_eq!(
        code(&["reduce", "--form", zero_den.to_str().unwrap()]),
        Some(2)
    );
    assert_eq!(code(&["reduce"]), Some(2));
}

#[test]
fn form_document_round_trips() {
    let body = r#"{"p": [[0, 4, "1"], [0, 4, "1/2"]], "q": [[1, 0, "-3/2"], [3, 1, "2/6"]]}"#;
    let path = form_file("rt.json", body);
    let first = json(&["reduce", "--form", path.to_str().unwrap()]);
    let again = form_file("rt2.json", &first["form"].to_string());
    let second = json(&["reduce", "--form", again.to_str().unwrap()]);
    assert_eq!(first, second);
    // duplicates were summed on the way in
    assert_eq!(first["form"]["p"], serde_json::json!([[0, 4, "3/2"]]));
}

#[test]
fn pf_targets() {
    assert_eq!(
        json(&["pf", "--emit", "ode"])["D"],
        serde_json::json!(["0", "-1", "64"])
    );
    assert_eq!(
        json(&["pf", "--emit", "riccati"])["a0"],
        serde_json::json!(["-5/2"])
    );
    assert_eq!(json(&["pf", "--emit", "matrices"])["B"][0][0], "2/3");
    assert_eq!(code(&["pf", "--emit", "jacobian"]), Some(2));
}

#[test]
fn eval_methods_agree() {
    for t in ["1/128", "1/80"] {
        let q = csv_rows(&["eval", "--t", t, "--monomial", "0", "0", "--method", "quad"]);
        let o = csv_rows(&["eval", "--t", t, "--monomial", "0", "0", "--method", "ode"]);
        assert!(q[0][1] > 0.0);
        assert!(
            (q[0][1] - o[0][1]).abs() <= 1e-8 * q[0][1],
            "{q:?} vs {o:?}"
        );
    }
}

#[test]
fn eval_rejects_levels_outside_the_range() {
    assert_eq!(
        code(&["eval", "--t", "0.02", "--monomial", "0", "0"]),
        Some(2)
    );
    assert_eq!(code(&["eval", "--t", "0", "--monomial", "0", "0"]), Some(2));
}

#[test]
fn zeros_of_a_positive_integral() {
    let path = form_file("x2y.json", r#"{"q": [[2, 1, "1"]]}"#);
    assert!(csv_rows(&["zeros", "--form", path.to_str().unwrap()]).is_empty());
    assert_eq!(
        code(&["zeros", "--form", path.to_str().unwrap(), "--grid", "10"]),
        Some(2)
    );
}

#[test]
fn bound_of_a_degree_four_form() {
    let path = form_file(
        "deg4.json",
        r#"{"p": [[0, 4, "1"]], "q": [[1, 0, "-3/2"], [3, 1, "1"]]}"#,
    );
    let v = json(&["bound", "--form", path.to_str().unwrap()]);
    assert_eq!(v["generic_bound"], "16");
    assert_eq!(v["outcome"], "certificate");
    assert!(v["instance_bound"].as_u64().unwrap() <= 16);
}

#[test]
fn verify_suites() {
    for suite in ["eq13", "pf", "riccati"] {
        assert_eq!(code(&["verify", "--suite", suite]), Some(0), "{suite}");
    }
    assert_eq!(
        code(&["verify", "--suite", "fuzz", "--seed", "42"]),
        Some(0)
    );
    assert_eq!(code(&["verify", "--suite", "everything"]), Some(2));
}
