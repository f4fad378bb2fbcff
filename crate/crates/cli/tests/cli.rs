//! End-to-end tests of the command-line interface: flag parsing, output
//! shape, determinism, and the exit-code contract (0 success, 1 domain
//! failure, 2 usage/parse error).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmfactor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn factor_hard_case() {
    let out = run(&["factor", "99968287751261", "--method", "rm", "--m", "120"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("9994573"), "{text}");
    assert!(text.contains("10002257"), "{text}");
}

#[test]
fn factor_prime_and_default_method() {
    let out = run(&["factor", "1009", "--m", "1"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("probable prime"));
}

#[test]
fn factor_sm_trace() {
    let out = run(&["factor", "91", "--method", "sm", "--m", "1"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("91 = 7 * 13"), "{text}");
    assert!(text.contains("iterations: 1"), "{text}");
}

#[test]
fn factor_usage_errors() {
    assert_eq!(exit_code(&run(&["factor", "not-a-number"])), 2);
    assert_eq!(exit_code(&run(&["factor", "91", "--method", "bogus"])), 2);
    assert_eq!(exit_code(&run(&["frobnicate"])), 2);
}

#[test]
fn generate_verify_bench_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let dataset = dir.path().join("d8.csv");
    let dataset_str = dataset.to_str().unwrap();

    let out = run(&[
        "generate", "--digits", "8", "--count", "40", "--seed", "7", "--out", dataset_str,
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let content = fs::read_to_string(&dataset).unwrap();
    assert_eq!(content.lines().count(), 41); // header + records
    assert!(content.starts_with("n,a,b,digits\n"));

    // same flags, byte-identical file
    let second = dir.path().join("d8-again.csv");
    run(&[
        "generate", "--digits", "8", "--count", "40", "--seed", "7",
        "--out", second.to_str().unwrap(),
    ]);
    assert_eq!(content, fs::read_to_string(&second).unwrap());

    let out = run(&["verify", dataset_str]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("40 records verified"));

    let report = dir.path().join("report.csv");
    let out = run(&[
        "bench", "--dataset", dataset_str, "--methods", "lehman,sm,rm",
        "--rm-m", "120", "--sm-m", "480", "--out", report.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let report_text = fs::read_to_string(&report).unwrap();
    assert!(report_text
        .starts_with("digits,method,multiplier,count,mean_iterations_floor,failures,wall_time_ms"));
    assert_eq!(report_text.lines().count(), 4); // header + one row per method

    // means are invariant under worker count
    let row = |workers: &str| -> Vec<String> {
        let out = run(&["bench", "--dataset", dataset_str, "--workers", workers]);
        assert_eq!(exit_code(&out), 0);
        stdout(&out)
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .take(6) // drop the wall-time column
            .map(str::to_owned)
            .collect()
    };
    assert_eq!(row("1"), row("4"));
}

#[test]
fn generate_rejects_tiny_digits() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "generate", "--digits", "2", "--count", "5",
        "--out", dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

#[test]
fn verify_and_bench_error_paths() {
    let dir = tempfile::tempdir().unwrap();

    // invariant violation: n != a*b
    let bad = dir.path().join("bad.csv");
    write(&bad, "n,a,b,digits\n100,3,5,3\n");
    let out = run(&["verify", bad.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("n != a*b"));

    // invariant violation: a^3 <= n
    let unbalanced = dir.path().join("unbalanced.csv");
    write(&unbalanced, "n,a,b,digits\n129140163,3,43046721,9\n");
    let out = run(&["verify", unbalanced.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("a^3 <= n"));

    // corrupt line: parse error names the line
    let corrupt = dir.path().join("corrupt.csv");
    write(&corrupt, "n,a,b,digits\n143,11,13,3\nnot-a-number,1,2,3\n");
    let out = run(&["bench", "--dataset", corrupt.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    // missing file
    let out = run(&["verify", dir.path().join("nope.csv").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}
