use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const FINITE: &str = "\
field F3
extend F9
jet 2
source vars: x ideal: ()
target vars: y ideal: ()
map f = (x^2)
map g = (2*x^2)
";

// W moves f to g over Q(√2); g was computed with `germ act`
const DESCENT: &str = "\
field Q
extend Q[a]/(a^2-2)
jet 4
source vars: x, y ideal: ()
target vars: u ideal: ()
map f = (x^2)
map g = (x^2 - 2*x^3 + 5*x^4)
aut W = (x + x^2, y + a*x^2)
vf X = x^2 d/dx + 1/3*y^2 d/dy
";

fn germ(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_germ")).current_dir(dir).args(args).output().unwrap()
}

fn workspace(files: &[(&str, &str)]) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in files {
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

fn result(out: &Output) -> Value {
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    doc["result"].clone()
}

#[test]
fn compile_then_solve_over_each_field() {
    let dir = workspace(&[("a.germ", FINITE)]);
    let out = germ(dir.path(), &["system", "-s", "a.germ", "-g", "R", "--map", "f", "--target", "g", "-o", "sys.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let sys: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("sys.json")).unwrap()).unwrap();
    assert_eq!(sys["field"], "F3");

    // 2a² = 1 has no root in F3
    let out = germ(dir.path(), &["solve", "--field", "F3", "sys.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(result(&out)["count"], 0);

    let out = germ(dir.path(), &["solve", "--field", "F9", "sys.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(result(&out)["count"], 2);

    let out = germ(dir.path(), &["groebner", "sys.json"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn solve_reads_a_hand_written_system() {
    let sys = r#"{"field": "F3", "unknowns": ["a"], "equations": ["2*a^2 - 1"]}"#;
    let dir = workspace(&[("sys.json", sys)]);
    let out = germ(dir.path(), &["solve", "--field", "F3", "sys.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = germ(dir.path(), &["groebner", "sys.json"]);
    assert_eq!(out.status.code(), Some(0));
    let inconsistent = r#"{"field": "F3", "unknowns": ["a"], "equations": ["a", "a - 1"]}"#;
    std::fs::write(dir.path().join("bad.json"), inconsistent).unwrap();
    assert_eq!(germ(dir.path(), &["groebner", "bad.json"]).status.code(), Some(2));
}

#[test]
fn descend_with_a_valid_witness() {
    let dir = workspace(&[("d.germ", DESCENT)]);
    let out = germ(dir.path(), &["descend", "-s", "d.germ", "-g", "R", "--map", "f", "--target", "g", "--elem", "W"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = result(&out);
    assert_eq!(r["descended"], true);
    assert_eq!(r["verified"], true);
}

#[test]
fn descend_with_an_invalid_witness_fails() {
    let dir = workspace(&[("d.germ", DESCENT)]);
    let out = germ(dir.path(), &["descend", "-s", "d.germ", "-g", "R", "--map", "f", "--target", "f", "--elem", "W"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("witness action mismatch at coefficient x^3"), "{err}");
}

#[test]
fn act_matches_the_recorded_target() {
    let dir = workspace(&[("d.germ", DESCENT)]);
    let out = germ(dir.path(), &["act", "-s", "d.germ", "-g", "R", "--elem", "W", "--map", "f"]);
    assert_eq!(out.status.code(), Some(0));
    let map = &result(&out)["map"][0];
    assert_eq!(map["x^2"], "1");
    assert_eq!(map["x^3"], "-2");
    assert_eq!(map["x^4"], "5");
}

#[test]
fn exp_and_log_round_trip() {
    let dir = workspace(&[("d.germ", DESCENT)]);
    let out = germ(dir.path(), &["exp", "-s", "d.germ", "-g", "R", "--vf", "X"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(result(&out)["log_round_trip"], true);
}

#[test]
fn session_from_stdin_and_errors() {
    let dir = workspace(&[]);
    let mut child = Command::new(env!("CARGO_BIN_EXE_germ"))
        .current_dir(dir.path())
        .args(["check", "--emit"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(FINITE.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let emitted = String::from_utf8(out.stdout).unwrap();
    assert!(emitted.contains("map g = (2*x^2)"), "{emitted}");

    std::fs::write(dir.path().join("bad.germ"), "map f = (x^2").unwrap();
    let out = germ(dir.path(), &["check", "-s", "bad.germ"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1") && err.contains("unbalanced parenthesis"), "{err}");

    // usage errors are errors, not negatives
    assert_eq!(germ(dir.path(), &["solve"]).status.code(), Some(1));
    assert_eq!(germ(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = workspace(&[("d.germ", DESCENT), ("a.germ", FINITE)]);
    let runs: [&[&str]; 4] = [
        &["descend", "-s", "d.germ", "-g", "R", "--map", "f", "--target", "g", "--elem", "W"],
        &["tangent", "-s", "d.germ", "-g", "LR", "--map", "f"],
        &["orbits", "-s", "a.germ", "-g", "R", "--map", "f"],
        &["stabilizer", "--seed", "11", "-s", "d.germ", "-g", "R", "--map", "f"],
    ];
    for args in runs {
        let a = germ(dir.path(), args);
        let b = germ(dir.path(), args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
