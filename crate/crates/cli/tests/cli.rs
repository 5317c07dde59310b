//! End-to-end runs of the `spinvar` binary.

use std::io::Write;
use std::process::{Command, Output};

use spinvar_cli::report::Report;

fn spinvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinvar")).args(args).env_remove("SPINVAR_TOL").output().expect("spawn spinvar")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn report(args: &[&str]) -> Report {
    let out = spinvar(args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn state_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn jm_one_zero() {
    let r = report(&["analyze", "--family", "jm", "--j", "1", "--m", "0", "--json"]);
    let diag = [1.0, 1.0, 0.0];
    for (k, [re, im]) in r.m_real.iter().enumerate() {
        let want = if k % 4 == 0 { diag[k / 4] } else { 0.0 };
        assert!((re - want).abs() < 1e-12 && *im == 0.0, "M[{k}] = {re}");
    }
    assert_eq!(r.regime.tag(), "mean-zero");
}

#[test]
fn cat_two() {
    let r = report(&["analyze", "--family", "cat", "--j", "2", "--json"]);
    for (got, want) in r.principal_real.variances.iter().zip([4.0, 1.0, 1.0]) {
        assert!((got - want).abs() < 1e-12, "{:?}", r.principal_real.variances);
    }
    assert!((r.phase_resolution.unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn text_output_by_default() {
    let out = spinvar(&["analyze", "--family", "coherent", "--j", "3/2", "--theta", "0.4", "--axis", "x"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("spin j = 3/2, regime mean-nonzero"), "{text}");
    assert!(text.contains("transversal_product"));
}

#[test]
fn file_input_round_trips() {
    let f = state_file(r#"{"two_j": 2, "kind": "pure", "amplitudes": [{"two_m": 2, "re": 0.6, "im": 0.0}, {"two_m": -2, "re": 0.0, "im": 0.8}]}"#);
    let out = spinvar(&["analyze", "--file", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let parsed: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(spinvar_cli::json::to_string(&parsed).unwrap() + "\n", text);
    assert_eq!(parsed.input.two_j, 2);
}

#[test]
fn density_file() {
    let f = state_file(
        r#"{"two_j": 1, "kind": "density", "matrix": [{"re": 0.5, "im": 0}, {"re": 0, "im": 0}, {"re": 0, "im": 0}, {"re": 0.5, "im": 0}]}"#,
    );
    let out = spinvar(&["analyze", "--file", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r: Report = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((r.principal_real.variances[0] - 0.25).abs() < 1e-12);
}

#[test]
fn malformed_file_names_field() {
    let f = state_file(r#"{"two_j": 2, "kind": "pure", "amplitudes": [{"two_m": "two", "re": 1.0, "im": 0.0}]}"#);
    let out = spinvar(&["analyze", "--file", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("amplitudes[0].two_m"), "{}", stderr(&out));

    let f = state_file(r#"{"two_j": 2, "kind": "pure", "amplitude": []}"#);
    let out = spinvar(&["analyze", "--file", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("amplitude"), "{}", stderr(&out));
}

#[test]
fn unnormalized_needs_flag() {
    let f = state_file(r#"{"two_j": 1, "kind": "pure", "amplitudes": [{"two_m": 1, "re": 1.0, "im": 0.0}, {"two_m": -1, "re": 1.0, "im": 0.0}]}"#);
    let path = f.path().to_str().unwrap();
    assert_eq!(spinvar(&["analyze", "--file", path]).status.code(), Some(3));
    assert_eq!(spinvar(&["analyze", "--file", path, "--normalize"]).status.code(), Some(0));
}

#[test]
fn input_errors_exit_two() {
    for args in [
        &["analyze", "--family", "jm", "--j", "1", "--m", "2"][..],
        &["analyze", "--family", "cat", "--j", "0.3"],
        &["analyze", "--family", "cat"],
        &["analyze", "--family", "nope", "--j", "1"],
        &["analyze", "--file", "/nonexistent/state.json"],
        &["scan", "--family", "cat", "--param", "j", "--from", "1", "--to", "2", "--steps", "0"],
        &["scan", "--family", "squeezed_exact", "--j", "1", "--param", "xi", "--from", "0", "--to", "1", "--steps", "3", "--log"],
    ] {
        let out = spinvar(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty());
    }
    let out = Command::new(env!("CARGO_BIN_EXE_spinvar"))
        .args(["analyze", "--family", "cat", "--j", "2"])
        .env("SPINVAR_TOL", "slack=abc")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_override_applies() {
    let run = |tol: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_spinvar"))
            .args(["analyze", "--family", "cat", "--j", "2"])
            .env("SPINVAR_TOL", tol)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        stdout(&out)
    };
    assert!(run("").contains("(Heisenberg scaling)"));
    assert!(!run("heisenberg_fraction=2").contains("(Heisenberg scaling)"));
}

#[test]
fn output_is_deterministic() {
    let args = ["analyze", "--family", "squeezed_exact", "--j", "3", "--xi", "0.1", "--json"];
    assert_eq!(spinvar(&args).stdout, spinvar(&args).stdout);
    let scan = ["scan", "--family", "jm", "--j", "5", "--param", "m", "--from", "-5", "--to", "5", "--steps", "11"];
    assert_eq!(spinvar(&scan).stdout, spinvar(&scan).stdout);
}

#[test]
fn scan_csv() {
    let out = spinvar(&["scan", "--family", "jm", "--j", "5", "--param", "m", "--from", "-5", "--to", "5", "--steps", "11"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>().join(","), "param,dj1_sq,dj2_sq,dj3_sq,djt1_sq,djt2_sq,djt3_sq,trace,phase_res");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 11);
    for row in rows {
        let m: f64 = row[0].parse().unwrap();
        let dj1: f64 = row[1].parse().unwrap();
        assert!((dj1 - 0.5 * (30.0 - m * m)).abs() < 1e-10);
    }
}

#[test]
fn verify_passes() {
    let out = spinvar(&["verify", "--trials", "50"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.contains(" PASS ")).count(), 13);
    assert!(text.lines().all(|l| !l.contains("FAIL")));
}
