use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn plhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plhom"))
        .args(args)
        .env_remove("PLHOM_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn ok_json(args: &[&str]) -> Value {
    let o = plhom(args);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("valid json")
}

fn fails_with(args: &[&str], code: i32, tag: &str) {
    let o = plhom(args);
    assert_eq!(o.status.code(), Some(code));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().count(), 1, "stderr: {err}");
    assert!(err.starts_with(&format!("error: {tag}: ")), "stderr: {err}");
}

#[test]
fn classify_potts_is_hard() {
    let v = ok_json(&["classify", "--matrix", &fixture("potts4_0.json"), "--json"]);
    assert_eq!(v["outcome"], "hard");
    assert_eq!(v["reason"], "tutteHardness-family");
}

#[test]
fn classify_tensor_has_certificate() {
    let v = ok_json(&["classify", "--matrix", &fixture("ising_tensor.json"), "--json"]);
    assert_eq!(v["outcome"], "tractable");
    assert_eq!(v["certificate"]["kind"], "TensorFactorization");
    let v = ok_json(&["classify", "--matrix", &fixture("hard2.json"), "--json"]);
    assert_eq!(v["outcome"], "hard");
}

#[test]
fn eval_auto_matches_brute() {
    let m = fixture("ising_tensor.json");
    for g in ["grid4.g", "k4.g", "k5.g"] {
        let g = fixture(g);
        let auto = ok_json(&["eval", "--matrix", &m, "--graph", &g, "--method", "auto", "--json"]);
        let brute = ok_json(&["eval", "--matrix", &m, "--graph", &g, "--method", "brute", "--json"]);
        assert_eq!(auto["z"], brute["z"]);
        assert_eq!(brute["method"], "brute");
    }
    let big = ok_json(&["eval", "--matrix", &m, "--graph", &fixture("grid8.g"), "--json"]);
    assert_eq!(big["method"], "tractable");
    let a = ok_json(&["ising", "--graph", &fixture("grid8.g"), "--a", "2", "--b", "1", "--json"]);
    let b = ok_json(&["ising", "--graph", &fixture("grid8.g"), "--a", "3", "--b", "1", "--json"]);
    let prod = a["z"].as_str().unwrap().parse::<num_bigint::BigInt>().unwrap() * b["z"].as_str().unwrap().parse::<num_bigint::BigInt>().unwrap();
    assert_eq!(big["z"].as_str().unwrap(), prod.to_string());
}

#[test]
fn eval_tractable_rejects_nonplanar_and_hard() {
    let m = fixture("ising_tensor.json");
    fails_with(&["eval", "--matrix", &m, "--graph", &fixture("k5.g"), "--method", "tractable"], 3, "NON_PLANAR");
    fails_with(
        &["eval", "--matrix", &fixture("potts4_0.json"), "--graph", &fixture("k3.g"), "--method", "tractable"],
        3,
        "CERTIFICATE_MISMATCH",
    );
}

#[test]
fn confluence_examples() {
    let o = plhom(&["confluence", "--vector", "1,1,-1,-1"]);
    assert_eq!(stdout(&o), "non-confluent");
    let v = ok_json(&["confluence", "--vector", "2,1,-1,-2", "--json"]);
    assert_eq!(v["confluent"], true);
    fails_with(&["confluence", "--vector", "1,1,1"], 3, "DOMAIN");
}

#[test]
fn small_commands() {
    let k3 = fixture("k3.g");
    assert_eq!(stdout(&plhom(&["ising", "--graph", &k3, "--a", "2", "--b", "1"])), "28");
    assert_eq!(stdout(&plhom(&["pm", "--graph", &fixture("k4.g")])), "3");
    let v = ok_json(&["counts", "--matrix", &fixture("ising21.json"), "--graph", &k3, "--json"]);
    assert_eq!(v, serde_json::json!([{"value": "2", "count": "6"}, {"value": "8", "count": "2"}]));
    let v = ok_json(&["interpolate", "--matrix", &fixture("ising21.json"), "--graph", &k3, "--json"]);
    assert_eq!(v["crosscheck"], true);
    let v = ok_json(&["lattice", "--values", "2,4,8,3", "--json"]);
    assert_eq!(v["dim"], 1);
    assert_eq!(v["basis"], serde_json::json!([[1, -2, 1, 0]]));
    let v = ok_json(&["psi", "--matrix", &fixture("potts4_0.json"), "--vector", "1,-1,0,0", "--json"]);
    assert_eq!(v["psi"], "0");
    let v = ok_json(&["forms", "--matrix", &fixture("potts4_0.json"), "--json"]);
    assert_eq!(v["forms"].as_array().unwrap().len(), 6);
}

#[test]
fn transform_graph_and_matrix() {
    let o = plhom(&["transform", "--gadget", "thicken:2", "--graph", &fixture("k3.g")]);
    assert!(stdout(&o).starts_with("3 6"));
    let v = ok_json(&["transform", "--gadget", "stretch:2", "--matrix", &fixture("ising21.json"), "--json"]);
    assert_eq!(v, serde_json::json!({"q": 2, "entries": [["5", "4"], ["4", "5"]]}));
    let o = plhom(&["transform", "--gadget", "rmid:1", "--graph", &fixture("k3.g")]);
    assert!(stdout(&o).starts_with("9 9"));
    fails_with(&["transform", "--gadget", "thicken:2"], 1, "USAGE");
}

#[test]
fn exit_codes() {
    assert_eq!(plhom(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(plhom(&["classify"]).status.code(), Some(1));
    assert_eq!(plhom(&["--help"]).status.code(), Some(0));
    fails_with(&["classify", "--matrix", &fixture("asym.json")], 2, "ASYMMETRIC");
    fails_with(&["classify", "--matrix", &fixture("badentry.json")], 2, "PARSE_ERROR");
    fails_with(&["classify", "--matrix", &fixture("missing.json")], 2, "IO_ERROR");
    fails_with(&["pm", "--graph", &fixture("broken.g")], 2, "PARSE_ERROR");
    fails_with(&["classify", "--matrix", &fixture("ones4.json")], 3, "RANK_DEFICIENT");
    fails_with(&["lattice", "--values", "-1,2"], 3, "NON_POSITIVE");
}

#[test]
fn deterministic_across_thread_counts() {
    let m = fixture("ising_tensor.json");
    let g = fixture("k5.g");
    let base = stdout(&plhom(&["counts", "--matrix", &m, "--graph", &g, "--json"]));
    for t in ["1", "3"] {
        let o = plhom(&["counts", "--matrix", &m, "--graph", &g, "--json", "--threads", t]);
        assert_eq!(stdout(&o), base);
    }
}
