use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_quartic-a3"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn count_at_height_one_prints_two() {
    assert_eq!(run(&["count", "--direct", "1"]).1, "2\n");
    assert_eq!(run(&["count", "--torsor", "1"]).1, "2\n");
}

#[test]
fn count_json_envelope() {
    let (status, out, _) = run(&["count", "--torsor", "200", "--format", "json", "--seed", "7"]);
    assert_eq!(status, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["provenance"]["seed"], 7);
    assert_eq!(v["provenance"]["command"], "count");
    assert!(v.get("elapsed").is_none());
    let direct: Value =
        serde_json::from_str(&run(&["count", "--direct", "200", "--format", "json"]).1).unwrap();
    assert_eq!(v["result"]["count"], direct["result"]["count"]);
}

#[test]
fn timing_adds_elapsed() {
    let (_, out, _) = run(&["count", "--direct", "10", "--format", "json", "--timing"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["elapsed"].as_f64().unwrap() >= 0.0);
}

#[test]
fn lift_negative_coordinates() {
    let (status, out, _) = run(&["lift", "1", "1", "1", "-1", "-1"]);
    assert_eq!(status, 0);
    assert_eq!(out, "η=(1, 1, 1, 1, 1, 1, 1) α=(-1, 0, 1)\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["count", "--direct", "0"]).0, 2);
    assert_eq!(run(&["count", "1"]).0, 2);
    assert_eq!(run(&["lift", "1", "2", "3", "4", "5"]).0, 2);
    assert_eq!(run(&["fit", "--ladder", "100,10"]).0, 2);
    assert_eq!(run(&["local-factors", "--pmax", "0"]).0, 2);
}

#[test]
fn local_factors_csv_has_one_row_per_prime() {
    let (status, out, _) = run(&["local-factors", "--pmax", "30", "--format", "csv"]);
    assert_eq!(status, 0);
    assert_eq!(out.lines().count(), 1 + 10);
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("quartic-a3-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("count.json");
    let (status, out, _) = run(&[
        "count",
        "--torsor",
        "50",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(status, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let count = v["result"]["count"].as_u64().unwrap();
    assert_eq!(count, quartic_a3::surface::count_direct(50).unwrap().count);
    std::fs::remove_dir_all(dir).unwrap();
}
