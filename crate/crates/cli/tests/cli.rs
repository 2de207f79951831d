use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const ELLIPTIC: &str = r#"{"picard": {"basis": ["sigma", "f"], "gram": [[-2, 1], [1, 0]]},
  "polarization": [1, 3], "mukai_vector": {"r": 2, "c1": [1, 3], "s": 1}}"#;

fn mukai(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mukai")).args(args).output().expect("run mukai")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mukai"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn mukai");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn instance(dir: &Path, family: &str, n: &str) -> String {
    let out = mukai(&["example", "--family", family, "--n", n, "--instance-only"]);
    assert_eq!(out.status.code(), Some(0));
    write(dir, &format!("{family}{n}.json"), std::str::from_utf8(&out.stdout).unwrap())
}

#[test]
fn example_reports_all_identities() {
    let v = json(&mukai(&["example", "--family", "A", "--n", "2", "--r", "1", "--a", "1"]));
    assert_eq!(v["affine_type"], "~A2");
    let checks = v["verification"].as_array().unwrap();
    assert_eq!(checks.len(), 11);
    assert!(checks.iter().all(|c| c["holds"] == true));
    assert_eq!(v["instance"]["picard"]["gram"], serde_json::json!([[0, 3, 3], [3, 0, 3], [3, 3, 0]]));
}

#[test]
fn classify_generated_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = instance(dir.path(), "A", "1");
    let v = json(&mukai(&["classify", &path]));
    assert_eq!(v["singularity"]["finite_type"], "A1");
    assert_eq!(v["singularity"]["exceptional_curves"], 1);
    assert_eq!(v["validation"]["ok"], true);
    assert_eq!(v["walls"]["count"], 2);
    let text = mukai(&["--format", "text", "classify", &path]);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&text.stdout).contains("singularity A1"));
}

#[test]
fn walls_from_stdin() {
    let v = json(&with_stdin(&["walls", "-"], ELLIPTIC));
    assert_eq!(v["count"], 2);
    assert_eq!(v["u_prime_count"], 0);
    for w in v["walls"].as_array().unwrap() {
        assert_eq!(w["pairing_with_v"], -1);
    }
}

#[test]
fn reflect_crosses_an_elliptic_wall() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "ell.json", ELLIPTIC);
    let v = json(&mukai(&["reflect", &path, "--u-index", "0"]));
    assert_eq!(v["pairing_with_v"], -1);
    assert_eq!(v["v_prime_square"], 0);
    // v' = v - u
    let u = &v["u"];
    let vp = &v["v_prime"];
    assert_eq!(vp["r"].as_i64().unwrap(), 2 - u["r"].as_i64().unwrap());
    assert_eq!(vp["s"].as_i64().unwrap(), 1 - u["s"].as_i64().unwrap());
    let out = mukai(&["reflect", &path, "--u-index", "7"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn dual_graph_dot_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = instance(dir.path(), "A", "2");
    let dot = dir.path().join("a2.dot");
    let out = mukai(&["dual-graph", &path, "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(&dot).unwrap(),
        "graph dual {\n  C_1 [label=\"C_1\"];\n  C_2 [label=\"C_2\"];\n  C_1 -- C_2 [label=\"1\"];\n}\n"
    );
    let d4 = instance(dir.path(), "D", "4");
    let out = mukai(&["dual-graph", &d4, "--dot", "-"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches(" -- ").count(), 3);
    assert_eq!(text.matches("[label=\"C_").count(), 4);
}

#[test]
fn chamber_with_alpha_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = instance(dir.path(), "A", "1");
    let alpha = write(dir.path(), "alpha.json", r#"{"c1": [1, -1]}"#);
    let v = json(&mukai(&["chamber", &path, "--alpha-file", &alpha]));
    assert_eq!(v["chamber"]["generic"], true);
    assert_eq!(v["chamber"]["alpha"]["s"], 0);
    assert_eq!(v["multiple_walls"], false);
    let on_wall = write(dir.path(), "zero.json", r#"{"c1": [0, 0]}"#);
    let v = json(&mukai(&["chamber", &path, "--alpha-file", &on_wall]));
    assert_eq!(v["multiple_walls"], true);
    let bad = write(dir.path(), "bad.json", r#"{"c1": [1, 1]}"#);
    assert_eq!(mukai(&["chamber", &path, "--alpha-file", &bad]).status.code(), Some(3));
}

#[test]
fn schema_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let asym = write(
        dir.path(),
        "asym.json",
        r#"{"picard": {"basis": ["a", "b"], "gram": [[0, 4], [3, 0]]}, "polarization": [1, 1], "mukai_vector": {"r": 2, "c1": [1, 1], "s": 2}}"#,
    );
    let out = mukai(&["classify", &asym]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("picard.gram[0][1]") || err.contains("picard.gram[1][0]"), "{err}");

    let broken = write(dir.path(), "broken.json", "{\"picard\": ");
    assert_eq!(mukai(&["walls", &broken]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(mukai(&["walls", missing.to_str().unwrap()]).status.code(), Some(2));
    let extra = write(dir.path(), "extra.json", &ELLIPTIC.replace("\"polarization\"", "\"colour\": 1, \"polarization\""));
    assert_eq!(mukai(&["walls", &extra]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let not_isotropic = write(dir.path(), "niso.json", &ELLIPTIC.replace("\"s\": 1", "\"s\": 2"));
    let out = mukai(&["walls", &not_isotropic]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("isotropic"));

    // wrong multiplicity: the report is printed and the exit code is 3
    let path = instance(dir.path(), "A", "2");
    let mut inst: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    inst["strata"][0]["mult"] = serde_json::json!(2);
    let bad = write(dir.path(), "bad.json", &inst.to_string());
    let out = mukai(&["classify", &bad, "--skip-walls"]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["validation"]["ok"], false);

    let out = mukai(&["example", "--family", "E", "--n", "5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = instance(dir.path(), "D", "4");
    let first = mukai(&["classify", &path]).stdout;
    for _ in 0..3 {
        assert_eq!(mukai(&["classify", &path]).stdout, first);
    }
}
