use std::fs;
use std::process::{Command, Output};

use singlefold::cli::{dispatch, EXIT_BUDGET, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};

fn run(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["singlefold"];
    argv.extend_from_slice(args);
    let mut out = Vec::new();
    let code = dispatch(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn binary(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_singlefold"));
    cmd.args(args)
        .env_remove("SINGLEFOLD_CACHE")
        .env_remove("SINGLEFOLD_WORKERS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

#[test]
fn limit_stream_lines() {
    let (code, out) = run(&["limit", "--n", "1", "--kappa", "2", "--max-m", "5"]);
    assert_eq!(code, EXIT_OK);
    let values: Vec<&str> = out.lines().map(|l| l.split(' ').nth(1).unwrap()).collect();
    assert_eq!(
        values,
        ["value=0", "value=1", "value=1", "value=1", "value=1", "value=1"]
    );
    assert_eq!(out.lines().last().unwrap(), "m=5 value=1 stable_for=5");
}

#[test]
fn verify_report() {
    assert_eq!(
        run(&["verify", "--family", "thm3", "--param", "1"]),
        (EXIT_OK, "family=thm3 param=1 ok=true max=10\n".into())
    );
    let (code, out) = run(&[
        "verify",
        "--family",
        "thm2",
        "--param",
        "2",
        "--unique-check",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.ends_with("max=256 unique=true\n"));
    let (code, out) = run(&[
        "verify",
        "--family",
        "uncond",
        "--param",
        "1",
        "--unique-check",
    ]);
    assert_eq!(code, EXIT_VERIFY);
    assert!(out.ends_with("unique=false\n"));
}

#[test]
fn number_theory_commands() {
    assert_eq!(
        run(&["lucas-lehmer", "--p", "2203"]),
        (EXIT_OK, "p=2203 prime=true\n".into())
    );
    assert_eq!(run(&["lucas-lehmer", "--p", "11"]).1, "p=11 prime=false\n");
    assert_eq!(run(&["lucas-lehmer", "--p", "9"]).0, EXIT_USAGE);
    let (code, out) = run(&["pell", "--k", "1", "--steps", "2"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "k=1 step=0 x=682 y=61 ok=true");
    assert!(lines.iter().all(|l| l.ends_with("ok=true")));
}

#[test]
fn usage_errors() {
    assert_eq!(
        run(&["beta", "--n", "2", "--m", "2", "--kappa", "3", "--omega1"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        run(&["beta", "--n", "2", "--m", "2", "--kappa", "1"]).0,
        EXIT_USAGE
    );
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(
        run(&["verify", "--family", "thm9", "--param", "1"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        run(&["verify", "--family", "thm2", "--param", "11"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        run(&["--workers", "0", "beta", "--n", "1", "--m", "1"]).0,
        EXIT_USAGE
    );
    assert_eq!(run(&["compile", "--poly", "x1 +"]).0, EXIT_USAGE);
    assert_eq!(
        run(&[
            "solve",
            "--system",
            "/nonexistent/system.txt",
            "--bound",
            "2"
        ])
        .0,
        EXIT_USAGE
    );
}

#[test]
fn budget_exhaustion() {
    assert_eq!(run(&["beta", "--n", "4", "--m", "40"]).0, EXIT_BUDGET);
    assert_eq!(
        run(&[
            "find-all",
            "--poly",
            "x1 - x2",
            "--oracle-bound",
            "5",
            "--max-m",
            "4"
        ])
        .0,
        EXIT_BUDGET
    );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("free.txt");
    fs::write(&path, "n 3\nx1 + x2 = x3\n").unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(
        run(&[
            "solve",
            "--system",
            p,
            "--bound",
            "50",
            "--node-limit",
            "10"
        ])
        .0,
        EXIT_BUDGET
    );
}

#[test]
fn beta_values() {
    assert_eq!(
        run(&["beta", "--n", "2", "--m", "2"]).1,
        "n=2 mode=kappa(2) m=2 value=2\n"
    );
    assert_eq!(
        run(&["beta", "--n", "1", "--m", "2", "--kappa", "3"]).0,
        EXIT_OK
    );
    assert_eq!(
        run(&["beta", "--n", "1", "--m", "3", "--omega1"]).0,
        EXIT_OK
    );
}

#[test]
fn conditional_procedures() {
    assert_eq!(
        run(&["find-all", "--poly", "x1^2 - 4", "--oracle-bound", "100"]).1,
        "(2)\ncount=1\n"
    );
    assert_eq!(
        run(&["find-all", "--poly", "x1 + 1", "--oracle-bound", "100"]).1,
        "count=0\n"
    );
    assert_eq!(
        run(&["bound-cond", "--poly", "x1^2 - 4", "--oracle-bound", "100"]).1,
        "bound=3\n"
    );
}

#[test]
fn system_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("sys.txt");
    let (code, text) = run(&["compile", "--poly", "x1^2 - x2"]);
    assert_eq!(code, EXIT_OK);
    fs::write(&sys, &text).unwrap();
    let s = sys.to_str().unwrap();

    let out_path = dir.path().join("again.txt");
    let (code, summary) = run(&[
        "compile",
        "--poly",
        "x1^2 - x2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(summary.starts_with("vars="));
    assert_eq!(fs::read_to_string(&out_path).unwrap(), text);

    let (code, out) = run(&["solve", "--system", s, "--bound", "9"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().last().unwrap(), "count=4");
    assert!(out.lines().next().unwrap().starts_with("(0,0,"));

    let (code, poly) = run(&["dioph", "--system", s]);
    assert_eq!(code, EXIT_OK);
    assert!(!poly.trim().is_empty());

    let phi = dir.path().join("phi.txt");
    fs::write(&phi, "n 3\nx1 * x1 = x2\nx3 = 1\n").unwrap();
    let (code, padded) = run(&["build-sn", "--phi", phi.to_str().unwrap(), "--n", "12"]);
    assert_eq!(code, EXIT_OK);
    assert!(padded.starts_with("n 12\n"));
    assert_eq!(
        run(&["build-sn", "--phi", phi.to_str().unwrap(), "--n", "11"]).0,
        EXIT_USAGE
    );
}

#[test]
fn cache_resume_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("limit.jsonl");
    let c = cache.to_str().unwrap();
    let (_, full) = run(&["limit", "--n", "2", "--max-m", "5"]);
    let (_, first) = run(&["limit", "--n", "2", "--max-m", "2", "--cache", c]);
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), 3);
    let (_, resumed) = run(&["limit", "--n", "2", "--max-m", "5", "--cache", c]);
    assert_eq!(resumed, full);
    assert!(full.starts_with(&first));
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), 6);

    fs::write(&cache, "{ not json\n").unwrap();
    assert_eq!(
        run(&["limit", "--n", "2", "--max-m", "1", "--cache", c]).0,
        EXIT_USAGE
    );
    let (code, restarted) = run(&[
        "limit",
        "--n",
        "2",
        "--max-m",
        "5",
        "--cache",
        c,
        "--restart",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(restarted, full);
}

#[test]
fn binary_exit_codes_and_env() {
    let out = binary(&["verify", "--family", "thm3", "--param", "1"], &[]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "family=thm3 param=1 ok=true max=10\n"
    );
    assert_eq!(binary(&["--bogus"], &[]).status.code(), Some(EXIT_USAGE));
    assert_eq!(binary(&["--help"], &[]).status.code(), Some(EXIT_OK));

    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env.jsonl");
    let out = binary(
        &["limit", "--n", "1", "--max-m", "3"],
        &[("SINGLEFOLD_CACHE", cache.to_str().unwrap())],
    );
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), 4);

    let a = binary(
        &["limit", "--n", "2", "--max-m", "3"],
        &[("SINGLEFOLD_WORKERS", "1")],
    );
    let b = binary(
        &["limit", "--n", "2", "--max-m", "3"],
        &[("SINGLEFOLD_WORKERS", "8")],
    );
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        binary(
            &["beta", "--n", "1", "--m", "1"],
            &[("SINGLEFOLD_WORKERS", "0")]
        )
        .status
        .code(),
        Some(EXIT_USAGE)
    );
}

#[test]
fn repeated_invocation_is_byte_identical() {
    for args in [
        &["beta", "--n", "2", "--m", "3", "--kappa", "3"][..],
        &["compile", "--poly", "3*x1*x2 - x3^2 + 7"][..],
        &["verify", "--family", "thm4", "--param", "2"][..],
    ] {
        assert_eq!(run(args), run(args));
    }
}
