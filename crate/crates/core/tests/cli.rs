use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locmat"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, v: &Value) {
    std::fs::write(dir.join(name), serde_json::to_string_pretty(v).unwrap()).unwrap();
}

fn element(rows: Value) -> Value {
    json!({"tower": {"n1": 2, "cycle": [2]}, "stage": 1, "matrix": {"field": "Q", "rows": rows}})
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[test]
fn steinitz_mul_golden() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["steinitz", "mul", "2^inf*3", "3^2*5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        report(&out),
        json!({
            "command": {"name": "steinitz", "argv": ["steinitz", "mul", "2^inf*3", "3^2*5"]},
            "exit": 0,
            "inputs": [],
            "results": {"op": "mul", "operands": ["2^inf*3", "3^2*5"], "value": "2^inf*3^3*5"},
            "status": "pass",
        })
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("2^inf*3^3*5"));
}

#[test]
fn steinitz_corner_not_divisible_is_error() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["steinitz", "corner", "--s", "2^inf", "--n", "3", "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["status"], "error");
    assert_eq!(r["results"]["error"]["code"], "NotDivisible");
}

#[test]
fn rank_of_matrix_unit() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "e11.json", &element(json!([[1, 0], [0, 0]])));
    let out = run(dir.path(), &["rank", "e11.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["normalized_rank"], "1/2");
    assert_eq!(r["results"]["rank"], 1);
    assert_eq!(r["results"]["self_check"]["agrees"], true);
    let bytes = std::fs::read(dir.path().join("e11.json")).unwrap();
    assert_eq!(r["inputs"], json!([{"path": "e11.json", "sha256": sha256_hex(&bytes)}]));
}

#[test]
fn det_values() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "d.json", &element(json!([[2, 0], [0, -4]])));
    write(dir.path(), "id.json", &element(json!([[1, 0], [0, 1]])));
    let r = report(&run(dir.path(), &["det", "d.json"]));
    assert_eq!(r["results"]["det"], "-8");
    assert_eq!(r["results"]["normalized_det"], json!({"v": "8", "n": 2}));
    let r = report(&run(dir.path(), &["det", "id.json"]));
    assert_eq!(r["results"]["normalized_det"], json!({"v": "1", "n": 1}));
    assert_eq!(r["exit"], 0);
}

#[test]
fn lemma2_identity_has_full_degree() {
    let dir = TempDir::new().unwrap();
    let id3 = json!({"field": "Q", "rows": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]});
    write(dir.path(), "id3.json", &id3);
    let r = report(&run(dir.path(), &["lemma2", "id3.json"]));
    let res = &r["results"];
    assert_eq!(res["degree"], 3);
    assert_eq!(res["rank_exact"], 3);
    assert_eq!(res["consistent"], true);
    assert_eq!(res["poly"]["coeffs"], json!(["0", "0", "0", "1"]));
}

#[test]
fn clifford_stage_three() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["clifford", "--stage", "3", "--out", "gammas.json"]);
    assert_eq!(out.status.code(), Some(0));
    let res = report(&out)["results"].clone();
    assert_eq!(res["generator_count"], 6);
    assert_eq!(res["generated_dimension"], 64);
    assert_eq!(res["relations"]["ok"], true);
    assert_eq!(res["steinitz"], "2^inf");
    let file: Value = serde_json::from_slice(&std::fs::read(dir.path().join("gammas.json")).unwrap()).unwrap();
    assert_eq!(file.as_array().map(Vec::len).or_else(|| file["generators"].as_array().map(Vec::len)), Some(6));
}

#[test]
fn counterexample_round_trip_through_analyze_map() {
    let dir = TempDir::new().unwrap();
    for (p, n) in [(2usize, 2usize), (3, 2)] {
        let out = run(dir.path(), &["counterexample", "--p", &p.to_string(), "--n", &n.to_string(), "--out", "cx.json"]);
        assert_eq!(out.status.code(), Some(0));
        let out = run(dir.path(), &["analyze-map", "cx.json", "--mode", "jordan"]);
        assert_eq!(out.status.code(), Some(0));
        let d = &report(&out)["results"]["decomposition"];
        assert_eq!(d["kind"], "mixed");
        assert_eq!(d["e1_rank"], (p - 1) * n);
        assert_eq!(d["e2_rank"], n);
        assert_eq!(d["verified"], true);
    }
}

#[test]
fn scaling_map_fails_with_exit_one() {
    let dir = TempDir::new().unwrap();
    // a ↦ 2a on M_2
    let coeffs: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| if i == j { 2 } else { 0 }).collect()).collect();
    write(dir.path(), "scale.json", &json!({"n": 2, "m": 2, "field": "Q", "coeffs": {"field": "Q", "rows": coeffs}}));
    let out = run(dir.path(), &["analyze-map", "scale.json", "--mode", "det"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "fail");
    assert_eq!(r["results"]["test"]["verdict"], "CertifiedFail");
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"n\":1").unwrap();
    let out = run(dir.path(), &["det", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["results"]["error"]["code"], "MalformedInput");
    let out = run(dir.path(), &["det", "missing.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(dir.path(), &["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "d.json", &element(json!([[3, 1], [1, 2]])));
    let cases: [&[&str]; 4] = [
        &["det", "d.json"],
        &["lemma2", "d.json", "--strategy", "random", "--seed", "7"],
        &["counterexample", "--p", "2", "--n", "2", "--out", "cx.json"],
        &["clifford", "--stage", "2"],
    ];
    for args in cases {
        let a = run(dir.path(), args);
        let first_file = std::fs::read(dir.path().join("cx.json")).ok();
        let b = run(dir.path(), args);
        assert_eq!(a.stdout, b.stdout, "stdout differs for {args:?}");
        assert_eq!(a.stderr, b.stderr, "stderr differs for {args:?}");
        assert_eq!(first_file, std::fs::read(dir.path().join("cx.json")).ok());
    }
}
