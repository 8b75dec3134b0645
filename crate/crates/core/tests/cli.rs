use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_basicindex")).args(args).env_remove("BASICINDEX_TOL").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn index_prints_per_closure_line() {
    let o = run(&["index", "corpus/sphere_suspension"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("north_pole: 1, south_pole: 1, total: 2\n"));
    let o = run(&["index", "corpus/carriere"]);
    assert!(stdout(&o).contains("total: 0"));
}

#[test]
fn json_like_report_parses() {
    let o = run(&["index", "corpus/cp2_signature_middle", "--format", "json-like"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["total"], 1);
    assert_eq!(v["matches"], true);
    assert_eq!(v["closures"].as_array().unwrap().len(), 3);
}

#[test]
fn mismatch_exits_one() {
    let dir = std::env::temp_dir().join(format!("basicindex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let text = basicindex::scenario::corpus_text("sphere_suspension").unwrap().replace("\"expected_index\": 2", "\"expected_index\": 3");
    let path = dir.join("wrong.json");
    std::fs::write(&path, text).unwrap();
    let o = run(&["index", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["index", "/nonexistent/scenario.json"]).status.code(), Some(2));
    assert_eq!(run(&["index", "corpus/unknown"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let o = run(&["spectrum", "corpus/carriere", "--closure", "nowhere"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_tolerance_variable_is_input_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_basicindex"))
        .args(["index", "corpus/carriere"])
        .env("BASICINDEX_TOL", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_reports_every_check() {
    let o = run(&["validate", "corpus/cp2_signature_increasing"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("anticommutation"));
    assert!(out.contains("all checks passed"));
    let o = run(&["validate", "corpus/odd_codim_q3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["global_perturbation"]["passed"], true);
}

#[test]
fn spectrum_with_oracle() {
    let o = run(&["spectrum", "corpus/sphere_suspension", "--closure", "north_pole", "--count", "4", "--numerical"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("lowest 4 levels: 0, 2, 2, 2"), "{out}");
    assert!(out.contains("max deviation"));
}

#[test]
fn model_check_and_corpus() {
    assert_eq!(run(&["model-check", "corpus/cp2_signature_swapped"]).status.code(), Some(0));
    let o = run(&["run-corpus"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("7/7 scenarios passed"));
    let o = run(&["list-examples"]);
    assert_eq!(stdout(&o).lines().count(), basicindex::scenario::CORPUS.len());
}

#[test]
fn localize_table() {
    let o = run(&["localize", "corpus/circle_cos_hat", "--s", "1,10,100", "--modes", "128", "--jmax", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("localization check passed"));
    assert!(out.contains("model kernel plus 1, minus 1"));
    // no circle model in this scenario
    assert_eq!(run(&["localize", "corpus/sphere_suspension"]).status.code(), Some(2));
}

#[test]
fn numbers_have_twelve_significant_digits() {
    let o = run(&["localize", "corpus/circle_cos_hat", "--s", "1,10,100", "--modes", "128", "--jmax", "4"]);
    // 1.94790489193 is the s = 10 excited level
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("1.94790489193"), "{}", stdout(&o));
}

#[test]
fn reports_are_deterministic() {
    let a = stdout(&run(&["index", "corpus/cp2_signature_increasing", "--format", "json"]));
    let b = stdout(&run(&["index", "corpus/cp2_signature_increasing", "--format", "json"]));
    assert_eq!(a, b);
}
