//! End-to-end runs of the `polychor` binary.

use serde_json::Value;
use std::fs;
use std::process::{Command, Output};

fn polychor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polychor")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", stdout(o)))
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn version_and_help_exit_zero() {
    let o = polychor(&["--version"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("polychor "));
    assert_eq!(polychor(&["--help"]).status.code(), Some(0));
}

#[test]
fn check_prints_the_main_type() {
    let o = polychor(&["check", "examples/bookseller.chor"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "()@Seller");
    let o = polychor(&["check", "delegation"]);
    assert_eq!(
        stdout(&o).trim(),
        "forall B::proc \\ {Seller, Seller2}. String@B ->{Seller, Seller2} (Int@B -> Bool@B) ->{Seller, Seller2} ()@B"
    );
}

#[test]
fn language_errors_exit_one_with_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad_type = write_temp(&dir, "t.chor", "processes A, B;\nmain = (\\x:Int@A. x) (1@B);\n");
    let o = polychor(&["check", &bad_type]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("t.chor:2:1: type error"), "{}", stderr(&o));

    let bad_syntax = write_temp(&dir, "p.chor", "processes A\nmain = 1@A;\n");
    let o = polychor(&["--format", "json", "parse", &bad_syntax]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["line"], 2);
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(polychor(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(polychor(&["verify", "bookseller"]).status.code(), Some(3));
    assert_eq!(polychor(&["check", "/nonexistent/nothing.chor"]).status.code(), Some(3));
    assert_eq!(polychor(&["project", "--role", "Nobody", "bookseller"]).status.code(), Some(3));
    assert_eq!(polychor(&["project", "bookseller"]).status.code(), Some(3));
}

#[test]
fn parse_output_reparses_to_itself() {
    let dir = tempfile::tempdir().unwrap();
    let once = stdout(&polychor(&["parse", "two_buyer"]));
    let f = write_temp(&dir, "again.chor", &once);
    let twice = stdout(&polychor(&["parse", &f]));
    assert_eq!(once, twice);
}

#[test]
fn project_role_shows_the_identity_split() {
    let o = polychor(&["project", "--role", "Seller", "examples/bookseller_service.chor"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("/\\B. ami B then"), "{s}");
    assert!(s.contains("(\\x:String. x) title"));
    assert!(s.contains("offer B {Buy: (), Quit: ()}"));
}

#[test]
fn project_all_writes_every_process_and_the_defs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = polychor(&["project", "--all", "--out", out.to_str().unwrap(), "two_buyer"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut names: Vec<String> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["Buyer1.local", "Buyer2.local", "Seller.local", "defs.local"]);
    assert!(fs::read_to_string(out.join("defs.local")).unwrap().contains("def "));
}

#[test]
fn run_reports_values_traces_and_timeouts() {
    let o = polychor(&["run", "poly_send_applied"]);
    assert_eq!(o.status.code(), Some(0));
    let o = polychor(&["run", "--trace-json", "bookseller"]);
    let steps = json(&o);
    assert_eq!(steps[0]["rule"], "Com");
    let o = polychor(&["run", "--trace", "bookseller"]);
    assert!(stdout(&o).lines().next().unwrap().starts_with("Com: "));
    let o = polychor(&["--format", "json", "run", "--fuel", "40", "diverge"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["outcome"], "timeout");
}

#[test]
fn simulate_is_reproducible_from_the_seed() {
    let args = ["simulate", "--seed", "11", "--trace-json", "two_buyer"];
    let a = json(&polychor(&args));
    let b = json(&polychor(&args));
    assert_eq!(a, b);
    let first = &a[0];
    assert!(first["label"]["kind"].is_string());
    assert!(first["label"]["participants"].is_array());
    assert!(first["state_hash"].is_string());

    let o = polychor(&["--format", "json", "simulate", "--policy", "roundrobin", "case_merge"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["outcome"], "all_values");
}

#[test]
fn verify_writes_a_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = polychor(&[
        "verify",
        "--theorem",
        "deadlock",
        "--depth",
        "8",
        "--report-json",
        report.to_str().unwrap(),
        "bookseller",
        "case_merge",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["status"], "pass");
    assert_eq!(v[0]["theorem"], "deadlock");
}

#[test]
fn verify_every_theorem_on_the_bookseller() {
    for t in ["completeness", "soundness", "deadlock"] {
        let o = polychor(&["--format", "json", "verify", "--theorem", t, "bookseller"]);
        assert_eq!(o.status.code(), Some(0), "{t}: {}", stdout(&o));
        assert_eq!(json(&o)[0]["status"], "pass");
    }
}

#[test]
fn examples_list_print_and_write() {
    let v = json(&polychor(&["--format", "json", "examples"]));
    assert!(v.as_array().unwrap().len() >= 6);
    assert!(stdout(&polychor(&["examples", "bookseller"])).starts_with("//"));
    let dir = tempfile::tempdir().unwrap();
    let o = polychor(&["examples", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("bookseller_service.chor").exists());
}

#[test]
fn every_verb_speaks_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let runs: [&[&str]; 7] = [
        &["parse", "bookseller"],
        &["check", "bookseller"],
        &["run", "bookseller"],
        &["project", "--role", "Buyer", "bookseller"],
        &["project", "--all", "--out", &out, "bookseller"],
        &["simulate", "bookseller"],
        &["verify", "--theorem", "deadlock", "bookseller"],
    ];
    for args in runs {
        let mut full = vec!["--format", "json"];
        full.extend_from_slice(args);
        let o = polychor(&full);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        json(&o);
    }
}
