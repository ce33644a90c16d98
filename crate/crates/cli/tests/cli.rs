use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_jacverify"));
    cmd.env_remove("JACVERIFY_WORKERS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn jacverify")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(manifest_dir().join("tests").join("golden").join(name)).expect("read golden file")
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = manifest_dir().join("schemas").join(name);
    let text = std::fs::read_to_string(&path).expect("read schema");
    let value: Value = serde_json::from_str(&text).expect("schema is json");
    jsonschema::validator_for(&value).expect("valid schema")
}

fn assert_valid(schema_name: &str, doc: &Value) {
    let v = schema(schema_name);
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}\n{doc:#}");
}

fn json_of(args: &[&str]) -> (Value, i32) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = run(&full);
    let code = o.status.code().expect("exit code");
    (serde_json::from_str(&stdout(&o)).expect("json stdout"), code)
}

#[test]
fn gens_json_matches_golden() {
    let o = run(&["gens", "--d", "1", "--n", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("gens_d1_n2.json"));
}

#[test]
fn gens_text_matches_golden() {
    let o = run(&["gens", "--d", "2", "--n", "2"]);
    assert_eq!(stdout(&o), golden("gens_d2_n2.txt"));
}

#[test]
fn z_and_identity_text_match_golden() {
    let o = run(&["z", "--d", "2", "--n", "2", "--u0", "1", "--uk", "2", "--nu", "1;1"]);
    assert_eq!(stdout(&o), golden("z_d2_example.txt"));
    let o = run(&["identity1", "--d", "2", "--n", "2", "--alpha", "2,0", "--u0", "1", "--un", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("identity1_d2.txt"));
}

#[test]
fn member_certificate_matches_golden() {
    let poly = "a[1,1]^3*a[1,2] + a[1,1]*a[1,2]*a[2,1]*a[2,2]";
    let o = run(&["member", "--d", "2", "--n", "2", "--poly", poly, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("member_fern_example.json"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["identity1", "--d", "2", "--n", "2", "--all"]).status.code(), Some(0));
    assert_eq!(run(&["member", "--d", "2", "--n", "2", "--poly", "1 * a[1,1]"]).status.code(), Some(1));
    // usage errors
    assert_eq!(run(&["member", "--d", "2", "--n", "2", "--poly", "a[1,1"]).status.code(), Some(2));
    assert_eq!(run(&["member", "--d", "2", "--n", "2", "--poly", "x[1]"]).status.code(), Some(2));
    assert_eq!(run(&["gens", "--d", "0"]).status.code(), Some(2));
    assert_eq!(run(&["identity1", "--d", "2", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify-theorem", "--d", "2", "--N", "3"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["involution", "--d", "2", "--n", "2", "--all", "--variant", "3"]).status.code(), Some(2));
}

#[test]
fn every_json_output_validates() {
    let (gens, _) = json_of(&["gens", "--d", "2", "--n", "3"]);
    assert_valid("gens.schema.json", &gens);
    let (cert, code) = json_of(&["member", "--d", "2", "--n", "2", "--poly", "1 * a[1,1]"]);
    assert_eq!(code, 1);
    assert_valid("certificate.schema.json", &cert);
    assert_eq!(cert["member"], Value::Bool(false));
    let (z, _) = json_of(&["z", "--d", "1", "--n", "2", "--u0", "1", "--uk", "2", "--k", "2"]);
    assert_valid("z.schema.json", &z);
    let (series, _) = json_of(&["inverse", "--d", "2", "--n", "2", "--Nmax", "4"]);
    assert_valid("inverse.schema.json", &series);
    let (coeff, _) = json_of(&["inverse", "--d", "2", "--n", "2", "--Nmax", "2", "--coeff", "1,1,1,2"]);
    assert_valid("inverse.schema.json", &coeff);
    assert_eq!(coeff["coeff"], Value::String("2 * a[1,1]*a[1,2]".into()));
    let (ech, _) = json_of(&["echelon", "--d", "2", "--n", "2", "--degree", "4"]);
    assert_valid("echelon.schema.json", &ech);
    assert_eq!(ech["rank"].as_u64().unwrap() as usize, ech["echelon"].as_array().unwrap().len());
    let reports: &[&[&str]] = &[
        &["cross-check", "--d", "2", "--n", "2"],
        &["identity1", "--d", "2", "--n", "2", "--all"],
        &["identity2", "--d", "2", "--n", "2", "--alpha", "2,0", "--u0", "1", "--un", "2", "--beta", "1"],
        &["relation", "--d", "2", "--all"],
        &["involution", "--d", "2", "--n", "2", "--all", "--variant", "2"],
        &["fern-lemmas", "--d", "2"],
        &["verify-theorem", "--d", "2", "--N", "2,4"],
        &["cayley-hamilton", "--n", "3", "--trials", "5"],
    ];
    for args in reports {
        let (doc, code) = json_of(args);
        assert_eq!(code, 0, "{args:?}");
        assert_valid("report.schema.json", &doc);
        assert_eq!(doc["status"], Value::String("pass".into()));
    }
}

#[test]
fn involution_dump_is_written_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("pairs.json");
    let o = run(&[
        "involution", "--d", "2", "--n", "2", "--alpha", "2,0", "--u0", "1", "--un", "2", "--variant", "2", "--beta", "1",
        "--dump", dump.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let pairs: Value = serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    assert_valid("pairs.schema.json", &pairs);
    let items = pairs.as_array().unwrap();
    // four states, listed once per pair
    assert_eq!(items.len(), 2);
    for p in items {
        assert_ne!(p["state_negative"], p["partner_negative"]);
    }
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn out_flag_writes_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let args = ["fern-lemmas", "--d", "3", "--format", "json"];
    let o = bin().args(args).args(["--out", out.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(read(&out), stdout(&run(&args)));
}

#[test]
fn worker_count_does_not_change_output() {
    let args = ["identity2", "--d", "3", "--n", "2", "--all", "--format", "json"];
    let one = bin().args(args).env("JACVERIFY_WORKERS", "1").output().unwrap();
    let four = bin().args(args).args(["--workers", "4"]).output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn timing_goes_to_stderr_only() {
    let plain = run(&["gens", "--d", "2", "--n", "2"]);
    let timed = run(&["gens", "--d", "2", "--n", "2", "--timing"]);
    assert_eq!(plain.stdout, timed.stdout);
    assert!(String::from_utf8_lossy(&timed.stderr).contains("elapsed"));
}

#[test]
fn seed_controls_random_checks() {
    let a = run(&["cayley-hamilton", "--n", "2", "--trials", "3", "--seed", "9", "--format", "json"]);
    let b = run(&["cayley-hamilton", "--n", "2", "--trials", "3", "--seed", "9", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("\"seed\": 9"));
}
