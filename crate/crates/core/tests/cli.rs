use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chowla"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn chowla")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// A table covering [1, 101000], written once per test binary.
fn fixture() -> &'static Path {
    static DIR: OnceLock<(TempDir, PathBuf)> = OnceLock::new();
    let (_, path) = DIR.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.lmt");
        let out = run(&[
            "sieve",
            "--limit",
            "101000",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        (dir, path)
    });
    path
}

fn table_arg() -> &'static str {
    fixture().to_str().unwrap()
}

fn column<'a>(csv: &'a str, name: &str) -> Vec<&'a str> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|c| *c == name).expect("column");
    lines
        .take_while(|l| !l.is_empty())
        .map(|l| l.split(',').nth(idx).unwrap())
        .collect()
}

#[test]
fn sieve_writes_expected_length() {
    let len = std::fs::metadata(fixture()).unwrap().len();
    assert_eq!(len, 32 + 101_000 / 4);
}

#[test]
fn correlate_single_shift() {
    let out = run(&[
        "correlate",
        "--table",
        table_arg(),
        "--h",
        "1",
        "--x",
        "10000",
    ]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert_eq!(column(&s, "raw_sum"), ["112"]);
    assert_eq!(column(&s, "value"), ["0.0112"]);
}

#[test]
fn correlate_without_h_gives_summatory() {
    let out = run(&[
        "correlate",
        "--table",
        table_arg(),
        "--x",
        "1e4",
        "--x",
        "10^5",
    ]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert_eq!(column(&s, "h"), ["0", "0"]);
    assert_eq!(column(&s, "raw_sum"), ["-94", "-288"]);
}

#[test]
fn chisq_matches_published_statistic() {
    let out = run(&["chisq", "--table", table_arg(), "--h", "1", "--x", "10000"]);
    assert!(out.status.success());
    let s = stdout(&out);
    let q: f64 = column(&s, "q")[0].parse().unwrap();
    assert!((q - 1.23490).abs() <= 1e-5, "{q}");
    assert_eq!(column(&s, "reject"), ["false"]);
}

#[test]
fn verify_passes_on_fresh_table() {
    let out = run(&["verify", "--table", table_arg(), "--n-max", "5000"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("verify: pass"));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn output_is_identical_across_thread_counts() {
    let args = [
        "sweep",
        "--table",
        table_arg(),
        "--x",
        "100000",
        "--h-min",
        "1",
        "--h-max",
        "200",
        "--mode",
        "moebius",
    ];
    let one = bin().arg("--threads").arg("1").args(args).output().unwrap();
    let two = bin().arg("--threads").arg("2").args(args).output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
    assert!(stdout(&one).contains("mean_abs"));
}

#[test]
fn json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&[
        "chisq",
        "--table",
        table_arg(),
        "--h",
        "2",
        "--x",
        "10000",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let obj = v.as_object().unwrap();
    assert_eq!(obj.len(), 1);
    let rows = obj.values().next().unwrap().as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["h"], 2);
    assert_eq!(rows[0]["total"], 10000);
}

#[test]
fn analytic_product() {
    let out = run(&[
        "analytic",
        "--shifts",
        "0,1",
        "--truncation-prime",
        "1000000",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let s = stdout(&out);
    let v: f64 = column(&s, "value")[0].parse().unwrap();
    assert!((v - 0.3226341426727525).abs() < 1e-12);
    assert_eq!(column(&s, "truncation_prime"), ["999983"]);
}

#[test]
fn analytic_with_table_compares_densities() {
    let out = run(&[
        "analytic",
        "--shifts",
        "0,1",
        "--table",
        table_arg(),
        "--x",
        "100000",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let s = stdout(&out);
    let empirical = s.split("\n\n").nth(1).expect("empirical section");
    assert_eq!(column(empirical, "within_envelope"), ["true"]);
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(run(&["correlate"]).status.code(), Some(2));
    assert_eq!(
        run(&["sieve", "--limit", "ten", "--out", "x"])
            .status
            .code(),
        Some(2)
    );
    // i/o and format
    assert_eq!(
        run(&["correlate", "--table", "/nonexistent/t.lmt", "--x", "10"])
            .status
            .code(),
        Some(3)
    );
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.lmt");
    std::fs::write(&junk, b"not a table at all, just some bytes").unwrap();
    assert_eq!(
        run(&["correlate", "--table", junk.to_str().unwrap(), "--x", "10"])
            .status
            .code(),
        Some(3)
    );
    // range
    assert_eq!(
        run(&[
            "correlate",
            "--table",
            table_arg(),
            "--h",
            "1000",
            "--x",
            "100500"
        ])
        .status
        .code(),
        Some(4)
    );
    assert_eq!(
        run(&[
            "sieve",
            "--limit",
            "0",
            "--out",
            dir.path().join("z").to_str().unwrap()
        ])
        .status
        .code(),
        Some(4)
    );
    // degenerate: no n <= 1 with n and n + 3 square-free
    assert_eq!(
        run(&[
            "correlate",
            "--table",
            table_arg(),
            "--h",
            "3",
            "--x",
            "1",
            "--mode",
            "moebius"
        ])
        .status
        .code(),
        Some(5)
    );
}
