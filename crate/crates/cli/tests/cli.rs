use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stationary-af"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn exported() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["corpus", "export", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    dir
}

fn doc(dir: &Path, name: &str) -> String {
    dir.join(format!("{name}.json")).to_str().unwrap().to_string()
}

fn write(dir: &Path, file: &str, text: &str) -> PathBuf {
    let p = dir.join(file);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn perron_data_of_the_2x2_companion() {
    let dir = exported();
    let o = run(&["analyze", &doc(dir.path(), "companion-2x2-j"), "--pf"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    let pf = &v["results"]["pf"][0];
    assert_eq!(pf["lambda"]["minpoly"], serde_json::json!(["-8", "1"]));
    assert_eq!(pf["left"], serde_json::json!([["8"], ["1"]]));
    assert_eq!(v["requested"], serde_json::json!(["pf"]));
}

#[test]
fn certificate_for_the_2x2_pair() {
    let dir = exported();
    let o = run(&[
        "analyze",
        &doc(dir.path(), "companion-2x2-j"),
        &doc(dir.path(), "companion-2x2-k"),
        "--check",
        "cstar",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    let c = &v["results"]["check:cstar"];
    assert_eq!(c["verified"], Value::Bool(true));
    assert!(c["certificate"]["b"].as_array().unwrap().len() >= 2);
}

#[test]
fn circulant_powers_are_not_conjugate() {
    let dir = exported();
    let o = run(&[
        "analyze",
        &doc(dir.path(), "circulant-5x5-j"),
        &doc(dir.path(), "circulant-5x5-k"),
        "--check",
        "conjugate",
        "--powers",
        "1..4",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    let c = &v["results"]["check:conjugate"];
    let pairs = c["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 16);
    assert!(pairs.iter().all(|p| p["conjugate"] == Value::Bool(false)));
    assert_eq!(c["obstruction"]["kind"], "RootsOfUnity");
}

#[test]
fn pairwise_battery_runs() {
    let dir = exported();
    let o = run(&[
        "analyze",
        &doc(dir.path(), "scalar-6"),
        &doc(dir.path(), "scalar-10"),
        "--check",
        "t7",
        "--check",
        "t10",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["results"]["check:t7"]["passed"], Value::Bool(false));
    assert_eq!(v["results"]["check:t10"]["obstruction"]["kind"], "PrimeSupport");
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("ragged.json", r#"{"name":"x","matrix":[["1","1"],["1"]]}"#),
        ("negative.json", r#"{"name":"x","matrix":[["-1"]]}"#),
        ("garbage.json", "not json"),
        ("spec.json", r#"{"name":"x","matrix":[["1","1"],["1","0"]],"companion_spec":["2","1"]}"#),
    ];
    for (file, text) in cases {
        let p = write(dir.path(), file, text);
        let o = run(&["analyze", p.to_str().unwrap(), "--charpoly"]);
        assert_eq!(code(&o), 2, "{file}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&run(&["analyze", missing.to_str().unwrap(), "--charpoly"])), 2);
    assert_eq!(code(&run(&["analyze", "--check", "bogus"])), 2);
    assert_eq!(code(&run(&["corpus", "run", "--only", "no-such-item"])), 2);
}

#[test]
fn precondition_failures_exit_3_with_a_name() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "perm.json", r#"{"name":"perm","matrix":[["0","1"],["1","0"]]}"#);
    let o = run(&["analyze", p.to_str().unwrap(), "--pf"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("not_primitive"), "{}", stderr(&o));
    let s = write(dir.path(), "sing.json", r#"{"name":"s","matrix":[["1","1"],["1","1"]]}"#);
    let o = run(&["analyze", s.to_str().unwrap(), s.to_str().unwrap(), "--check", "cstar"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn budget_exhaustion_exits_4() {
    let dir = exported();
    let o = run(&[
        "analyze",
        &doc(dir.path(), "companion-2x2-j"),
        &doc(dir.path(), "companion-2x2-k"),
        "--check",
        "cstar",
        "--budget",
        "2",
    ]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn reports_are_deterministic() {
    let dir = exported();
    let args = [
        "analyze".to_string(),
        doc(dir.path(), "unimodular-4x4-j"),
        doc(dir.path(), "unimodular-4x4-k"),
        doc(dir.path(), "unimodular-4x4-a1"),
        "--charpoly".into(),
        "--pf".into(),
        "--dimgroup".into(),
        "--padic".into(),
        "3".into(),
        "2".into(),
        "--check".into(),
        "t6".into(),
        "--check".into(),
        "t10".into(),
    ];
    let a = bin().args(&args).output().unwrap();
    let b = bin().args(&args).output().unwrap();
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn corpus_run_is_thread_count_independent() {
    let one = bin().args(["corpus", "run"]).env("RAYON_NUM_THREADS", "1").output().unwrap();
    let many = bin().args(["corpus", "run"]).env("RAYON_NUM_THREADS", "4").output().unwrap();
    assert_eq!(code(&one), 0, "{}", stderr(&one));
    assert_eq!(one.stdout, many.stdout);
    let v = json(&one);
    let tags: Vec<_> = v.as_array().unwrap().iter().map(|r| r["tag"].as_str().unwrap().to_string()).collect();
    let mut sorted = tags.clone();
    sorted.sort();
    assert_eq!(tags, sorted);
}

#[test]
fn corpus_list_and_subset() {
    let o = run(&["corpus", "list"]);
    assert_eq!(code(&o), 0);
    let tags: Vec<_> = json(&o).as_array().unwrap().iter().map(|i| i["tag"].as_str().unwrap().to_string()).collect();
    for t in ["companion-2x2", "circulant-5x5", "unimodular-4x4", "cubic-5x5", "cubic-6x6", "scalar-1x1", "sextic-6x6", "scaled-6x6"] {
        assert!(tags.iter().any(|x| x == t), "{t}");
    }
    let o = run(&["corpus", "run", "--only", "scalar"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&o).as_array().unwrap().len(), 2);
}

#[test]
fn exported_documents_round_trip() {
    let dir = exported();
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let file: Value = serde_json::from_str(&text).unwrap();
        let o = run(&["analyze", path.to_str().unwrap(), "--charpoly"]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let subject = &json(&o)["subjects"][0];
        assert_eq!(subject["name"], file["name"]);
        assert_eq!(subject["matrix"], file["matrix"]);
        // Canonical form: pretty JSON, name first, string entries, trailing newline.
        assert!(text.starts_with("{\n  \"name\": "), "{text}");
        assert!(text.ends_with("}\n"));
        assert!(file["matrix"].as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap()).all(Value::is_string));
    }
}
