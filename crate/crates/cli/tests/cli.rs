use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SQUARE: &str = r#"{"kind":"polygon","vertices":[[0,0],[1,0],[1,1],[0,1]]}"#;
const DISK: &str = r#"{"kind":"disk","center":[0,0],"radius":1}"#;

fn osclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osclab")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn geometry_reports_square_invariants() {
    let t = TempDir::new().unwrap();
    let sq = write(t.path(), "sq.json", SQUARE);
    let out = osclab(&["geometry", "--domain", s(&sq)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["diameter"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    assert!((v["width"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(v["manifest_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn bad_inputs_exit_2() {
    let t = TempDir::new().unwrap();
    let bad = write(t.path(), "bad.json", r#"{"kind":"polygon","vertices":[[0,0],[1,0]]}"#);
    let sq = write(t.path(), "sq.json", SQUARE);
    assert_eq!(osclab(&["geometry", "--domain", s(&bad)]).status.code(), Some(2));
    assert_eq!(osclab(&["geometry", "--domain", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(osclab(&["audit", "--audit", "nope"]).status.code(), Some(2));
    assert_eq!(osclab(&["search", "--domain", s(&sq), "--n", "4", "--budget", "5"]).status.code(), Some(2));
    assert_eq!(osclab(&["search", "--domain", s(&sq), "--n", "4", "--init", "sideways"]).status.code(), Some(2));
    assert_eq!(osclab(&["table"]).status.code(), Some(2));
    assert_eq!(osclab(&["table", "/nonexistent/manifest.json"]).status.code(), Some(2));
    let threads = Command::new(env!("CARGO_BIN_EXE_osclab"))
        .args(["geometry", "--domain", s(&sq)])
        .env("OSC_LAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn failing_audit_exits_3() {
    // The q = 1 H-set gap is known to be violated on some random polygons.
    let t = TempDir::new().unwrap();
    let dir = t.path().join("a");
    let out = osclab(&["audit", "--audit", "hgap", "--q", "1", "--trials", "40", "--seed", "0", "--out", s(&dir)]);
    assert_eq!(out.status.code(), Some(3));
    let lines = std::fs::read_to_string(dir.join("audit.jsonl")).unwrap();
    assert!(lines.lines().any(|l| l.contains("\"pass\":false")));
    assert!(dir.join("manifest.json").exists());
}

#[test]
fn passing_audit_exits_0() {
    let out = osclab(&["audit", "--audit", "zclass", "--trials", "5", "--seed", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# manifest_hash="));
}

#[test]
fn oversized_radius_exits_5_with_hint() {
    let t = TempDir::new().unwrap();
    let sq = write(t.path(), "sq.json", SQUARE);
    let out = osclab(&["covering", "--domain", s(&sq), "--r", "0.05"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("largest buildable r"));
}

#[test]
fn covering_on_square_succeeds() {
    let t = TempDir::new().unwrap();
    let sq = write(t.path(), "sq.json", SQUARE);
    let dir = t.path().join("c");
    let out = osclab(&["covering", "--domain", s(&sq), "--r", "0.005", "--out", s(&dir)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let c = json(&dir.join("covering.json"));
    assert_eq!(c["components"].as_array().unwrap().len(), 4);
    assert!(c["measure"].as_f64().unwrap() <= c["measure_bound"].as_f64().unwrap());
}

#[test]
fn search_is_deterministic_and_reruns_identically() {
    let t = TempDir::new().unwrap();
    let disk = write(t.path(), "disk.json", DISK);
    let a = t.path().join("a");
    let b = t.path().join("b");
    let args = ["search", "--domain", s(&disk), "--n", "3", "--budget", "3000", "--restarts", "2", "--seed", "7"];
    let mut with_a = args.to_vec();
    with_a.extend(["--out", s(&a)]);
    let mut with_b = args.to_vec();
    with_b.extend(["--out", s(&b)]);
    assert_eq!(osclab(&with_a).status.code(), Some(0));
    assert_eq!(osclab(&with_b).status.code(), Some(0));
    let sa = std::fs::read(a.join("search.json")).unwrap();
    assert_eq!(sa, std::fs::read(b.join("search.json")).unwrap());
    assert_eq!(std::fs::read(a.join("trace.csv")).unwrap(), std::fs::read(b.join("trace.csv")).unwrap());

    let c = t.path().join("c");
    let out = osclab(&["rerun", "--manifest", s(&a.join("manifest.json")), "--out", s(&c)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(sa, std::fs::read(c.join("search.json")).unwrap());
    assert_eq!(json(&a.join("manifest.json")), json(&c.join("manifest.json")));

    let v = json(&a.join("search.json"));
    let m = json(&a.join("manifest.json"));
    assert_eq!(v["manifest_hash"], m["hash"]);
    assert!(v["best_M"].as_f64().unwrap() < 15.0 * 3.0 / 2.0);

    let table = osclab(&["table", s(&a.join("manifest.json")), "--format", "csv"]);
    assert_eq!(table.status.code(), Some(0));
    let text = String::from_utf8(table.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert!(rows[0].starts_with("# manifest_hash="));
    assert_eq!(rows.len(), 3);
    assert!(rows[2].contains(",3,2,"));
}

#[test]
fn different_seeds_change_the_hash() {
    let t = TempDir::new().unwrap();
    let sq = write(t.path(), "sq.json", SQUARE);
    let run = |seed: &str| {
        let out = osclab(&["audit", "--audit", "zclass", "--domain", s(&sq), "--trials", "2", "--seed", seed]);
        assert_eq!(out.status.code(), Some(0));
        let first = String::from_utf8(out.stdout).unwrap().lines().next().unwrap().to_string();
        serde_json::from_str::<serde_json::Value>(&first).unwrap()["manifest_hash"].clone()
    };
    assert_ne!(run("1"), run("2"));
    assert_eq!(run("3"), run("3"));
}
