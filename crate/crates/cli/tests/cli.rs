use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rect-spectra"));
    c.env_remove("RECT_SPECTRA_PRECISION");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).expect("schema file")).expect("schema json")
}

/// Runs the command, expects exit 0, validates against the named schema.
fn json_ok(name: &str, args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_str(&stdout(&o)).expect("json output");
    let s = schema(name);
    let compiled = jsonschema::JSONSchema::compile(&s).expect("valid schema");
    if let Err(errors) = compiled.validate(&doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{args:?} does not match {name} schema: {msgs:?}");
    }
    doc
}

#[test]
fn optimize_area_k9() {
    let doc = json_ok("optimize-area", &["optimize-area", "--k", "9", "--format", "json"]);
    assert_eq!(doc["value"]["n"], "64/3");
    assert_eq!(doc["value"]["w"], "16/3");
    assert_eq!(doc["optimizers"][0]["modes"], serde_json::json!([[4, 1], [0, 2]]));
}

#[test]
fn dirichlet_via_min_sense() {
    let doc = json_ok("optimize-area", &["optimize-area", "--k", "1", "--sense", "min"]);
    assert_eq!(doc["sense"], "min");
    assert_eq!(doc["value"]["n"], "2");
    assert_eq!(doc["optimizers"][0]["w"], "1");
}

#[test]
fn perimeter_min_k1_not_attained() {
    let doc = json_ok("optimize-perimeter", &["optimize-perimeter", "--sense", "min", "--k", "1"]);
    assert_eq!(doc["attained"], false);
    assert_eq!(doc["value_float"], 0.25);
    assert!(doc["optimizers"].as_array().unwrap().is_empty());
}

#[test]
fn perimeter_max_k3() {
    let doc = json_ok("optimize-perimeter", &["optimize-perimeter", "--k", "3"]);
    assert_eq!(doc["attained"], true);
    assert_eq!(doc["optimizers"][0]["a_exact"], "1/2");
    assert_eq!(doc["value_float"], 4.0);
}

#[test]
fn bounds_lemma2_clean() {
    let doc = json_ok("bounds", &["bounds", "--check", "lemma2", "--k-max", "100"]);
    assert!(doc["violations"].as_array().unwrap().is_empty());
    for name in ["lemma1", "polya", "square_count"] {
        json_ok("bounds", &["bounds", "--check", name, "--k-max", "50", "--samples", "50", "--seed", "7"]);
    }
}

#[test]
fn spectrum_shapes() {
    let doc = json_ok("spectrum", &["spectrum", "--k", "5", "--w", "4"]);
    assert_eq!(doc["entry"]["modes"], serde_json::json!([[2, 1]]));
    json_ok("spectrum", &["spectrum", "--k", "3", "--a", "0.5"]);
    json_ok("spectrum", &["spectrum", "--k", "1", "--w", "1", "--boundary", "dirichlet"]);
}

#[test]
fn asymptotics_and_conjecture() {
    let doc = json_ok("asymptotics", &["asymptotics", "--k-max", "32"]);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 32);
    let doc = json_ok("conjecture", &["conjecture", "--k-max", "2"]);
    let ks: Vec<&str> = doc.as_array().unwrap().iter().map(|r| r["k"].as_str().unwrap()).collect();
    assert_eq!(ks, ["1", "4", "15"]);
    assert!(doc.as_array().unwrap().iter().all(|r| r["square_optimal"] == true));
}

#[test]
fn table_matches() {
    let doc = json_ok("table", &["table"]);
    assert!(doc["mismatches"].as_array().unwrap().is_empty());
    assert_eq!(doc["rows"][7]["value"], "18*sqrt(5)/5");
    assert_eq!(doc["rows"][11]["optimizers"][0]["b"], "(8/5)^(1/4)");
    let csv = stdout(&run(&["table", "--format", "csv"]));
    assert_eq!(csv.lines().count(), 1 + 15 + 4);
    assert!(csv.starts_with("k,value,value_float,w,b,b_float,modes\n"));
}

#[test]
fn deterministic_output() {
    for args in [&["asymptotics", "--k-max", "40"][..], &["bounds", "--check", "lemma1", "--samples", "30", "--seed", "3"]] {
        assert_eq!(run(args).stdout, run(args).stdout);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["optimize-area"]).status.code(), Some(1));
    assert_eq!(run(&["bounds", "--check", "lemma9"]).status.code(), Some(1));
    assert_eq!(run(&["spectrum", "--k", "1", "--w", "x/y"]).status.code(), Some(1));
    assert_eq!(run(&["optimize-area", "--k", "0"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--k", "1", "--w", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--precision", "10", "table"]).status.code(), Some(2));
    assert_eq!(run(&["--max-k", "5", "optimize-area", "--k", "6"]).status.code(), Some(3));
    assert_eq!(run(&["--max-modes", "10", "spectrum", "--k", "50"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn precision_from_env_and_flag() {
    let o = bin().env("RECT_SPECTRA_PRECISION", "20").args(["optimize-area", "--k", "2"]).output().unwrap();
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["value_float"].as_str().unwrap().replace('.', "").len(), 20);
    let o = bin().env("RECT_SPECTRA_PRECISION", "5").args(["optimize-area", "--k", "2"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["--precision", "40", "optimize-area", "--k", "2"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["value_float"].as_str().unwrap().replace('.', "").len(), 40);
}

#[test]
fn writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let o = run(&["optimize-area", "--k", "4", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,sense,value,value_float,w,b_float,mode_pairs");
    assert_eq!(lines.len(), 3);
}
