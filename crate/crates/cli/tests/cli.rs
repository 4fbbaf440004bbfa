use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wbs(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wbs")).args(args).current_dir(cwd).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn schreier_commands() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&wbs(&["schreier", "unrank", "5"], dir.path()));
    assert_eq!(v["set"], serde_json::json!([3, 4, 5]));
    let v = json(&wbs(&["schreier", "rank", "3,4,5"], dir.path()));
    assert_eq!(v["rank"], "5");
    let v = json(&wbs(&["schreier", "count", "500"], dir.path()));
    assert!(v["count"].as_str().unwrap().starts_with("139423224561697880"));
    // Grade 6 holds ranks 6..=8; the alternative order reverses it.
    let v = json(&wbs(&["--enumeration", "alt", "schreier", "unrank", "6"], dir.path()));
    assert_eq!(v["set"], serde_json::json!([3, 5, 6]));
    let v = json(&wbs(&["--enumeration", "alt", "schreier", "rank", "2,6"], dir.path()));
    assert_eq!(v["rank"], "8");
    assert_eq!(wbs(&["schreier", "rank", "2,3,4"], dir.path()).status.code(), Some(1));
}

#[test]
fn cesaro_certificate_shape() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&wbs(&["cesaro", "certify", "--subsequence", "affine:2,0", "--N", "3"], dir.path()));
    assert_eq!(v["N"], 3);
    assert_eq!(v["A_N"].as_array().unwrap().len(), 8);
    assert_eq!(v["mean"], "1/2");
    assert_eq!(v["prefix_len"], 11);
    assert!(v["i0"].is_string());

    let file = write(dir.path(), "sub.json", "[1, 2, 3, 4]");
    let out = wbs(&["cesaro", "certify", "--subsequence", &file, "--N", "2"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("5"));

    let challenge = write(
        dir.path(),
        "challenge.json",
        r#"{"alpha": "1/2", "k_seq": [1, 2, 3], "i_seq": [1, 2, 3], "j_seq": [1, 2, 3]}"#,
    );
    let v = json(&wbs(&["cesaro", "witness", &challenge], dir.path()));
    assert_eq!((v["n"].as_u64(), v["j"].as_u64(), v["entry"].as_u64()), (Some(2), Some(1), Some(0)));
}

#[test]
fn metric_and_pairs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "line.json", r#"{"points": [[0], [1], [2], [3], [10], [11]], "metric": "euclidean"}"#);
    assert!(json(&wbs(&["metric", "validate", &good], dir.path()))["violations"].as_array().unwrap().is_empty());

    let bad = write(dir.path(), "bad.json", r#"{"matrix": [[0,1,3],[1,0,1],[3,1,0]], "labels": ["a","b","c"]}"#);
    let out = wbs(&["metric", "validate", &bad], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["violations"][0]["axiom"], "triangle");

    let fam = dir.path().join("family.json");
    let out = wbs(&["pairs", "find", &good, "--K", "0.5", "--count", "3", "--out", fam.to_str().unwrap()], dir.path());
    assert!(out.status.success());
    let v = json(&wbs(&["pairs", "verify", &good, fam.to_str().unwrap()], dir.path()));
    assert_eq!(v["ok"], true);
    assert_eq!(v["pairs"], 3);

    // More pairs than points allow.
    let out = wbs(&["pairs", "find", &good, "--K", "0.5", "--count", "4"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    let overlap = write(dir.path(), "overlap.json", r#"{"points": [[-10], [0], [1], [2], [12]]}"#);
    let fam2 = write(dir.path(), "f2.json", r#"{"K": 0.2, "pairs": [["0", "1"], ["4", "3"]]}"#);
    let out = wbs(&["pairs", "verify", &overlap, &fam2], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn holder_and_embeddings() {
    let dir = tempfile::tempdir().unwrap();
    let space = write(dir.path(), "two.json", r#"{"points": [[0], [1]]}"#);
    let field = write(dir.path(), "f.json", r#"{"values": [0, 1]}"#);
    let v = json(&wbs(&["holder", "seminorm", &space, &field, "--alpha", "1"], dir.path()));
    assert_eq!((v["sup"].as_f64(), v["seminorm"].as_f64(), v["norm"].as_f64()), (Some(1.0), Some(1.0), Some(2.0)));

    let line = write(dir.path(), "line.json", r#"{"points": [[0], [0.5], [1], [4], [4.5], [5]]}"#);
    let v = json(&wbs(&["holder", "bump", &line, "--x", "0", "--y", "1", "--K", "1", "--alpha", "0.5"], dir.path()));
    assert!(v["seminorm"].as_f64().unwrap() <= v["bound"].as_f64().unwrap() + 1e-12);

    let fam = dir.path().join("fam.json");
    assert!(wbs(&["pairs", "find", &line, "--K", "0.5", "--count", "2", "--out", fam.to_str().unwrap()], dir.path()).status.success());
    let report = dir.path().join("report.json");
    let out = wbs(
        &["embed", "holder", &line, fam.to_str().unwrap(), "--alpha", "0.5", "--vector", "random:1", "--report", report.to_str().unwrap()],
        dir.path(),
    );
    json(&out);
    let r: Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert!(r["failures"].as_array().unwrap().is_empty());
    assert!(r["lower"].as_f64().unwrap() >= 1.0 - 1e-9);

    let a = write(dir.path(), "a.json", "[0.5, -0.75]");
    let v = json(&wbs(&["embed", "cb", &line, "--centers", "0,4", "--radii", "0.5,0.5", "--vector", &a], dir.path()));
    assert_eq!(v["image_norm"], v["a_norm"]);
    let v = json(&wbs(&["embed", "linf", "--masses", "0.5,0.5", "--vector", &a], dir.path()));
    assert_eq!(v["image_norm"].as_f64(), Some(0.75));
    // Overlapping balls are refused.
    let out = wbs(&["embed", "cb", &line, "--centers", "0,1", "--radii", "3,3", "--vector", &a], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn classify_commands() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&wbs(&["classify", "ordinal", "w^2*3 + w*2 + 5"], dir.path()));
    assert_eq!(v["cb_rank"], 3);
    assert_eq!(v["derived_set"], "ω·3 + 2");
    assert_eq!(v["verdict"]["wbs"], true);

    let v = json(&wbs(&["classify", "cb", "--ordinal", "w^w"], dir.path()));
    assert_eq!(v["wbs"], false);
    let v = json(&wbs(&["classify", "cb", "--assume", "noncompact"], dir.path()));
    assert_eq!(v["wbs"], false);
    assert!(v["reason"]["assumption"].is_string());
    let v = json(&wbs(&["classify", "calpha", "--assume", "finite", "--points", "10"], dir.path()));
    assert_eq!(v["wbs"], true);
    let v = json(&wbs(&["classify", "calpha", "--assume", "infinite"], dir.path()));
    assert_eq!(v["wbs"], false);
    let v = json(&wbs(&["classify", "linf", "--masses", "0.5,0.25,0.25"], dir.path()));
    assert_eq!(v["wbs"], true);
    let v = json(&wbs(&["classify", "linf", "--masses", "0.5,0.25", "--non-terminal"], dir.path()));
    assert_eq!(v["wbs"], false);
    assert!(v["reason"]["theorem"].as_str().unwrap().contains("L∞"));

    // Infiniteness must be stated, not guessed.
    assert_eq!(wbs(&["classify", "calpha", "--points", "3"], dir.path()).status.code(), Some(2));
}

#[test]
fn experiments_write_reproducible_reports() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a", "b"] {
        let o = wbs(&["--seed", "5", "--out", out, "experiment", "run", "sandwich-suite"], dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = fs::read(dir.path().join("a/sandwich-suite.json")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b/sandwich-suite.json")).unwrap());
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["passed"], true);

    let csv = fs::read_to_string(dir.path().join("a/sandwich-suite.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("experiment,seed,case,quantity,value,bound,ok"));
    assert!(lines.all(|l| l.starts_with("sandwich-suite,5,") && l.ends_with(",true")));

    let o = wbs(&["--out", "c", "experiment", "run", "cesaro-suite"], dir.path());
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&fs::read(dir.path().join("c/cesaro-suite.json")).unwrap()).unwrap();
    assert_eq!(v["artifacts"].as_array().unwrap().len(), 600);

    let empty = write(dir.path(), "empty.json", "");
    assert_eq!(wbs(&["experiment", "run", "cesaro-suite", "--config", &empty], dir.path()).status.code(), Some(2));
    assert_eq!(wbs(&["experiment", "run", "no-such-suite"], dir.path()).status.code(), Some(2));
    assert_eq!(wbs(&["experiment", "run"], dir.path()).status.code(), Some(2));
}
