use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_tenspec"));
    c.env_remove("TENSPEC_SEED");
    c
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tenspec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

#[test]
fn charpoly_of_unit_tensor() {
    let u = scratch("u2.json", r#"{"n":1,"d":3,"kind":"sym","coeffs":["1","0","0","1"]}"#);
    let o = run(&["charpoly", "--tensor", u.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "tenspec/1");
    assert_eq!(v["result"]["coeffs"], serde_json::json!(["-4", "6", "-4", "1"]));
}

#[test]
fn eigen_of_diagonal_cubic() {
    let t = scratch("diag.json", r#"{"n":1,"d":3,"kind":"sym","coeffs":["3/2","0","0","-7"]}"#);
    let v = json(&run(&["eigen", "--tensor", t.to_str().unwrap()]));
    let mut got: Vec<(String, u64)> = v["result"]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["lambda"].as_str().unwrap().to_string(), e["multiplicity"].as_u64().unwrap()))
        .collect();
    got.sort();
    assert_eq!(got, vec![("-7".to_string(), 2), ("3/2".to_string(), 2)]);
}

#[test]
fn malformed_json_names_the_field() {
    let t = scratch("bad.json", r#"{"n":1,"d":3,"kind":"cube","coeffs":[1,0,0,1]}"#);
    let o = run(&["charpoly", "--tensor", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`kind`"));
    let t = scratch("bad2.json", r#"{"n":1,"d":3,"kind":"sym"}"#);
    let o = run(&["charpoly", "--tensor", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`coeffs`"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["rank", "--n", "1"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn same_seed_gives_identical_reports() {
    let a = run(&["hurwitz", "--n", "1", "--d", "4", "--trials", "40", "--seed", "9"]);
    let b = run(&["hurwitz", "--n", "1", "--d", "4", "--trials", "40", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["hurwitz", "--n", "1", "--d", "4", "--trials", "40", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn environment_seed_overrides_flag() {
    let o = bin().env("TENSPEC_SEED", "7").args(["rank", "--n", "1", "--d", "3", "--seed", "8"]).output().unwrap();
    assert_eq!(json(&o)["seed"], 7);
    let o = run(&["rank", "--n", "1", "--d", "3", "--seed", "8"]);
    assert_eq!(json(&o)["seed"], 8);
}

#[test]
fn out_flag_writes_file() {
    let u = scratch("u3.json", r#"{"n":1,"d":3,"kind":"sym","coeffs":[1,0,0,1]}"#);
    let out = u.with_file_name("report.json");
    let o = run(&["charpoly", "--tensor", u.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["command"], "charpoly");
}

#[test]
fn rank_of_symmetric_quintic_map() {
    let v = json(&run(&["rank", "--n", "1", "--d", "5", "--symmetric"]));
    assert_eq!(v["result"]["rank"], 6);
    assert_eq!(v["result"]["domain_dim"], 6);
}

#[test]
fn fiber_of_binary_cubic_char_poly() {
    let t = scratch("t3.json", r#"{"n":1,"d":3,"kind":"sym","coeffs":["2","-1/3","5/7","1"]}"#);
    let v = json(&run(&["charpoly", "--tensor", t.to_str().unwrap()]));
    let cp = serde_json::json!({"n": 1, "d": 3, "coeffs": v["result"]["coeffs"]});
    let p = scratch("phi3.json", &cp.to_string());
    let o = run(&["fiber", "--n", "1", "--d", "3", "--charpoly", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["count"], 24);
    let o = run(&["fiber", "--n", "1", "--d", "4", "--charpoly", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn cubic_classification() {
    let t = scratch("cusp.json", r#"{"n":2,"d":3,"kind":"sym","coeffs":[1,0,0,0,0,0,0,-1,0,0]}"#);
    let v = json(&run(&["cubic", "classify", "--tensor", t.to_str().unwrap()]));
    assert_eq!(v["result"]["label"], "cuspidal");
    assert_eq!(v["result"]["singular_points"].as_array().unwrap().len(), 1);
}

#[test]
fn verify_maps_failures_to_criteria() {
    let o = run(&["verify", "--criterion", "11", "--criterion", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["criteria"][0]["name"], "image-dimensions");
    let o = run(&["verify", "--criterion", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["result"]["criteria"][0]["passed"], false);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bincubic-identities"));
}
