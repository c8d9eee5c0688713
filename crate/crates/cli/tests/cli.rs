//! End-to-end runs of the binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clusterlab")).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clusterlab")).args(args).env(key, value).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_tmp(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("clusterlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn h3_text_report() {
    let p = write_tmp("h3.json", r#"{"B": [[0, {"cos": 5}, 0], [{"quad": {"c0": [-1, 2], "c1": [-1, 2], "d": 5}}, 0, -1], [0, 1, 0]]}"#);
    let o = run(&["c-pattern", "--input", p.to_str().unwrap(), "--depth", "7", "--format", "text"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("Size\n32\n"));
    assert!(text.contains("finite, maximum depth = 6"));
    assert!(text.contains("Periodicity"));
}

#[test]
fn catalog_default_depths() {
    let o = run(&["c-pattern", "--type", "H4", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["size"], 280);
    assert_eq!(v["finiteness"]["max_depth"], 10);
}

#[test]
fn text_is_stable_across_thread_counts() {
    let args = ["c-pattern", "--type", "H3", "--format", "text"];
    let one = run_env(&args, "CLUSTERLAB_THREADS", "1");
    let four = run_env(&args, "CLUSTERLAB_THREADS", "4");
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    let bad = run_env(&args, "CLUSTERLAB_THREADS", "zero");
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn expect_coherent_exit_code() {
    let p = write_tmp("incoherent.json", r#"[[0, "1/2"], ["-1/2", 0]]"#);
    let path = p.to_str().unwrap();
    let o = run(&["c-pattern", "--input", path, "--depth", "3", "--expect-coherent"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["c-pattern", "--input", path, "--depth", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["coherence"]["words"][0], serde_json::json!([1, 2]));
}

#[test]
fn zero_matrix_b_pattern() {
    let p = write_tmp("zero2.json", "[[0, 0], [0, 0]]");
    let o = run(&["b-pattern", "--input", p.to_str().unwrap(), "--depth", "3", "--format", "text"]);
    assert!(stdout(&o).contains("Size\n1\n"));
}

#[test]
fn quasi_integer_certificate() {
    // Five-vertex quasi-integer quiver; weights are c·sqrt(d) written as quadratic scalars.
    let w = |c: i64, d: u64| format!(r#"{{"quad": {{"c0": 0, "c1": {c}, "d": {d}}}}}"#);
    let arrows = [(1, 2, w(2, 3)), (3, 1, w(2, 6)), (5, 1, w(2, 15)), (3, 2, w(4, 2)), (2, 4, w(3, 5)), (5, 2, w(2, 5)), (5, 4, "4".to_string())];
    let list: Vec<String> = arrows.iter().map(|(a, b, x)| format!(r#"{{"from": {a}, "to": {b}, "weight": {x}}}"#)).collect();
    let p = write_tmp("quiver.json", &format!(r#"{{"n": 5, "arrows": [{}]}}"#, list.join(",")));
    let o = run(&["classify-quasi-integer", "--input", p.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["quasi_integer"], true);
    assert_eq!(v["certificate"]["D"], serde_json::json!([3, 1, 2, 5, 5]));
    assert_eq!(v["certificate"]["verified"], true);
    let o = run(&["construct-integer", "--input", p.to_str().unwrap()]);
    assert_eq!(json(&o)["B"][1], serde_json::json!([-6, 0, -8, 15, -10]));
}

#[test]
fn not_quasi_integer() {
    let p = write_tmp("half.json", r#"[[0, "1/2"], ["-1/2", 0]]"#);
    let o = run(&["classify-quasi-integer", "--input", p.to_str().unwrap()]);
    let v = json(&o);
    assert_eq!(v["quasi_integer"], false);
    assert!(v["witness"]["edge"].is_array());
}

#[test]
fn sk_and_symmetrizer() {
    let p = write_tmp("b2.json", "[[0, -2], [1, 0]]");
    let path = p.to_str().unwrap();
    let v = json(&run(&["sk", "--input", path]));
    assert_eq!(v[0][1]["quad"]["d"], 2);
    assert_eq!(v[0][1]["quad"]["c1"], serde_json::json!([-1, 1]));
    let v = json(&run(&["skew-symmetrizer", "--input", path]));
    assert_eq!(v["D"][1]["rat"], serde_json::json!([2, 1]));
}

#[test]
fn fan_and_graphs() {
    let v = json(&run(&["fan", "--type", "H3", "--verify"]));
    assert_eq!(v["cone_count"], 32);
    assert_eq!(v["rays"], 18);
    assert_eq!(v["fan_verified"], true);
    let p = write_tmp("bad.json", r#"[[0, "-1/2"], [2, 0]]"#);
    let path = p.to_str().unwrap();
    let g = json(&run(&["exchange-graph", "--input", path, "--kind", "G", "--depth", "12"]));
    assert_eq!(g["vertices"], 10);
    let f = json(&run(&["exchange-graph", "--input", path, "--kind", "fan", "--depth", "12"]));
    assert_eq!(f["vertices"], 5);
    assert_eq!(f["regular"], true);
}

#[test]
fn rank2_outputs() {
    let v = json(&run(&["rank2", "--a", "6/5", "--b", "6/5"]));
    assert_eq!(v["classification"]["verdict"], "Incoherent");
    assert_eq!(v["classification"]["depth"], 3);
    let v = json(&run(&["rank2", "--a", r#"{"cos": 7}"#, "--b", r#"{"cos": 7}"#]));
    assert_eq!(v["classification"]["m"], 7);
    assert_eq!(v["cones"].as_array().unwrap().len(), 9);
    let svg = write_tmp("fan.svg", "");
    let o = run(&["rank2", "--a", "1", "--b", "4", "--depth", "10", "--svg", svg.to_str().unwrap()]);
    assert!(o.status.success());
    let first = std::fs::read_to_string(&svg).unwrap();
    assert!(first.starts_with("<svg") && first.contains("stroke-dasharray"));
    run(&["rank2", "--a", "1", "--b", "4", "--depth", "10", "--svg", svg.to_str().unwrap()]);
    assert_eq!(first, std::fs::read_to_string(&svg).unwrap());
}

#[test]
fn catalog_and_errors() {
    let v = json(&run(&["catalog", "A2"]));
    assert_eq!(v["matrix"], serde_json::json!([[{"rat": [0, 1]}, {"rat": [-1, 1]}], [{"rat": [1, 1]}, {"rat": [0, 1]}]]));
    assert_eq!(json(&run(&["catalog", "H4"]))["default_depth"], 11);
    let o = run(&["catalog", "Z9"]);
    assert_eq!(o.status.code(), Some(1));
    let broken = write_tmp("broken.json", "[[0, 1],\n [-1, 0");
    let o = run(&["sk", "--input", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2 column"));
}
