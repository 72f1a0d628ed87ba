use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn liminal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liminal"))
        .args(args)
        .env_remove("LIMINAL_CAP")
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = liminal(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn classify_nodes() {
    let v = json_of(&["classify", "--ws", "1,1,1,1:2"]);
    assert_eq!(v["liminal_k"], 1);
    assert_eq!(v["weight_sum"], "2/1");
    let even = json_of(&["classify", "--ws", "1,1,1,1,1:2"]);
    assert!(even["liminal_k"].is_null());
    let text = liminal(&["classify", "--ws", "1,1,1,1:2"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("liminal k 1"));
}

#[test]
fn numerology_and_family() {
    let v = json_of(&["numerology", "--ws", "1,1,1,1,1,1:2"]);
    assert_eq!(v, json!({"N": 4, "a": 2, "k": 2, "kE_degree": -4, "kX_coefficient": 3, "r": 3}));
    let f = json_of(&["family", "--n", "7", "--k", "3"]);
    assert_eq!(f["exponents"], json!([2, 2, 2, 2, 2, 2, 2, 2]));
    assert_eq!(liminal(&["numerology", "--ws", "1,1,1,1,1:2"]).status.code(), Some(2));
}

#[test]
fn spectrum_of_a_cubic_cone() {
    let v = json_of(&["spectrum", "--exponents", "3,3,3,3"]);
    assert_eq!(v["mu"], 16);
    let entries = v["spectrum"].as_array().unwrap();
    assert_eq!(entries.first().unwrap(), &json!(["4/3", 1]));
    assert!(entries.contains(&json!(["2/1", 6])));
    assert_eq!(liminal(&["spectrum", "--exponents", "9,9,9,9,9", "--mu-cap", "100"]).status.code(), Some(2));
}

#[test]
fn cohomology_tables() {
    let t = json_of(&["cohomology", "--ws", "1,1,1,1,1,1:2", "--sheaf", "tangentE", "--twist", "-2"]);
    assert_eq!(t, json!({"exact": true, "h": [0, 1, 0, 0, 0]}));
    let log = json_of(&["cohomology", "--ws", "1,1,1,1,1,1:2", "--sheaf", "log", "--twist", "2"]);
    assert_eq!(log["h"][0], 0);
    assert_eq!(log["h"][1], 1);
    let t1 = json_of(&["cohomology", "--ws", "2,2,2,1,1:4", "--sheaf", "t1"]);
    assert_eq!(t1["dims"], json!([[-4, 1], [-3, 2], [-2, 3], [-1, 2], [0, 1]]));
    assert_eq!(t1["total"], 9);
    let prim = json_of(&["cohomology", "--ws", "1,1,1,1,1,1:2", "--sheaf", "primitive", "--p", "2"]);
    assert_eq!(prim["dim"], 1);
    assert_eq!(liminal(&["cohomology", "--ws", "1,1,1,1:2", "--sheaf", "omegaTop"]).status.code(), Some(2));
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn obstruction_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let pair = write(
        dir.path(),
        "pair.json",
        r#"{"k":2,"m":1,"points":[{"id":"x1","c":"1","class":["1"]},{"id":"x2","c":"1","class":["-1"]}]}"#,
    );
    let out = liminal(&["--json", "obstruction", "check", "--config", &pair]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["witness"], json!({"lambda": {"x1": "1/1", "x2": "1/1"}}));
    assert_eq!(v["s_prime"], 1);

    assert_eq!(liminal(&["obstruction", "check", "--config", &pair, "--lambda", "1,-1"]).status.code(), Some(0));
    assert_eq!(liminal(&["obstruction", "check", "--config", &pair, "--lambda", "1,2"]).status.code(), Some(1));

    let single = write(dir.path(), "single.json", r#"{"k":2,"points":[{"id":"x1","class":["1"]}]}"#);
    assert_eq!(liminal(&["obstruction", "check", "--config", &single]).status.code(), Some(1));

    let broken = write(dir.path(), "broken.json", r#"{"k":2,"points":[{"id":"x1","c":"0","class":["1"]}]}"#);
    assert_eq!(liminal(&["obstruction", "check", "--config", &broken]).status.code(), Some(2));
    assert_eq!(liminal(&["obstruction", "check", "--config", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let out = liminal(&["verify", "all", "--ws", "1,1,1,1,1,1:2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().all(|l| l.contains(": pass")));
    assert_eq!(liminal(&["verify", "nonsense", "--ws", "1,1,1,1:2"]).status.code(), Some(2));
}

#[test]
fn enumerate_and_export_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json").display().to_string();
    let b = dir.path().join("b.json").display().to_string();
    for path in [&a, &b] {
        assert_eq!(liminal(&["export", "--max-n", "5", "--max-d", "8", "--output", path]).status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let c = dir.path().join("c.json").display().to_string();
    assert_eq!(liminal(&["export", "--from", &a, "--output", &c]).status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());

    let listed = liminal(&["enumerate", "--max-n", "5", "--max-d", "8"]);
    assert_eq!(listed.stdout, std::fs::read(&a).unwrap());

    let csv = liminal(&["enumerate", "--max-n", "4", "--max-d", "4", "--k", "1", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("n,degree,weights,"));
    assert!(!text.contains('\r'));
}

#[test]
fn node_cap_is_enforced() {
    let out = liminal(&["--cap", "100", "enumerate", "--max-n", "6", "--max-d", "12"]);
    assert_eq!(out.status.code(), Some(2));
    let env = Command::new(env!("CARGO_BIN_EXE_liminal"))
        .args(["enumerate", "--max-n", "6", "--max-d", "12"])
        .env("LIMINAL_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(liminal(&[]).status.code(), Some(2));
    assert_eq!(liminal(&["classify", "--ws", "1,1,x:2"]).status.code(), Some(2));
}
