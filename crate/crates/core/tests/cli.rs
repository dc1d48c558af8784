//! End-to-end smoke tests of the command-line interface.

use std::process::Command;

const TERM: &str = "binom(i+j,i)*binom(n-i,j)*binom(n-j,n-i-j)";

fn telsum(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_telsum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn problem_args<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![
        "--term",
        TERM,
        "--rec-var",
        "n",
        "--sum-vars",
        "i,j",
    ];
    v.extend_from_slice(extra);
    v
}

#[test]
fn estden_prints_denominators() {
    let mut args = vec!["estden"];
    args.extend(problem_args(&[]));
    let out = telsum(&args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("g1"), "stdout: {stdout}");
    assert!(stdout.contains("g2"), "stdout: {stdout}");
}

#[test]
fn telescope_verify_sumcheck_pipeline() {
    let dir = std::env::temp_dir().join("telsum-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cert_path = dir.join("carlitz1-cert.json");
    let cert_str = cert_path.to_str().unwrap();

    let mut args = vec!["telescope"];
    args.extend(problem_args(&["--emit", cert_str]));
    let out = telsum(&args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let written = std::fs::read_to_string(&cert_path).unwrap();
    assert!(written.contains("\"order\""), "certificate JSON: {written}");

    let mut args = vec!["verify"];
    args.extend(problem_args(&["--cert", cert_str]));
    let out = telsum(&args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let mut args = vec!["sumcheck"];
    args.extend(problem_args(&["--cert", cert_str, "--n-range", "0..6"]));
    let out = telsum(&args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn quotients_subcommand_prints_common_denominator() {
    let mut args = vec!["quotients"];
    args.extend(problem_args(&["--order", "2"]));
    let out = telsum(&args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("d  ="), "stdout: {stdout}");
    assert!(stdout.contains("q2 ="), "stdout: {stdout}");
}

#[test]
fn missing_arguments_fail_cleanly() {
    let out = telsum(&["telescope", "--term", TERM]);
    assert!(!out.status.success(), "missing roles must be an error");
    let out = telsum(&["verify", "--cert", "/nonexistent/cert.json"]);
    assert!(!out.status.success(), "missing problem must be an error");
}
