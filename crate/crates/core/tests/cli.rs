use std::fs;
use std::path::Path;
use std::process::Command;

use ucover::cli::dispatch;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["ucover"];
    argv.extend_from_slice(args);
    let code = dispatch(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let f = dir.join(name);
    fs::write(&f, text).unwrap();
    f
}

#[test]
fn solve_and_check_fig1() {
    let dir = tempfile::tempdir().unwrap();
    let (code, inst, _) = run(&["gen", "fig1"]);
    assert_eq!(code, 0);
    let f = write(dir.path(), "fig1.inst", &inst);
    let wit = dir.path().join("fig1.wit");
    let (code, out, err) = run(&["solve", p(&f), "--witness-out", p(&wit)]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "verdict: coverable\n");
    let (code, out, _) = run(&["check", p(&f), p(&wit)]);
    assert_eq!(code, 0);
    assert!(out.starts_with("verdict: accepted\n"));
}

#[test]
fn canonical_fig1_reaches_eleven() {
    let dir = tempfile::tempdir().unwrap();
    let wit = dir.path().join("w");
    let (_, inst, _) = run(&["gen", "fig1", "--witness-out", p(&wit)]);
    let f = write(dir.path(), "i", &inst);
    let (code, out, _) = run(&["check", p(&f), p(&wit)]);
    assert_eq!(code, 0);
    assert!(out.contains("final: q(0, 11)"), "{out}");
}

#[test]
fn rejection_names_the_reason() {
    let dir = tempfile::tempdir().unwrap();
    let (_, inst, _) = run(&["gen", "fig1"]);
    let f = write(dir.path(), "i", &inst);
    let bad = write(dir.path(), "w", "#1 #1\n");
    let (code, out, err) = run(&["check", p(&f), p(&bad)]);
    assert_eq!(code, 1);
    assert!(out.contains("verdict: rejected"));
    assert!(out.contains("reason: infeasible"));
    assert!(err.contains("infeasible"));
    let short = write(dir.path(), "w2", "( #0 #1 )^2\n");
    let (code, out, _) = run(&["check", p(&f), p(&short)]);
    assert_eq!(code, 1);
    assert!(out.contains("reason: target-not-covered"), "{out}");
}

#[test]
fn not_coverable_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "i",
        "vass 2u\nstate a\nstate b\ntrans a a -1 0\ninit a 3 0\ntarget b 0 0\n",
    );
    let (code, out, _) = run(&["solve", p(&f)]);
    assert_eq!((code, out.as_str()), (1, "verdict: not-coverable\n"));
    let (code, out, _) = run(&["oracle", p(&f)]);
    assert_eq!((code, out.as_str()), (1, "verdict: not-coverable\n"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["solve"]).0, 2);
    assert_eq!(run(&["solve", "/nonexistent/file"]).0, 2);
    let f = write(dir.path(), "i", "vass 2u\nstate q\ntrans q r 1 0\n");
    let (code, _, err) = run(&["solve", p(&f)]);
    assert_eq!(code, 2);
    assert!(err.contains("error"));
    let (_, inst, _) = run(&["gen", "fig1"]);
    let g = write(dir.path(), "g", &inst);
    let w = write(dir.path(), "w", "( #0 ");
    assert_eq!(run(&["check", p(&g), p(&w)]).0, 2);
    assert_eq!(run(&["gen", "fig2", "--n", "0"]).0, 2);
}

#[test]
fn unary_range_needs_permissive() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "i",
        "vass 2u\nstate q\ntrans q q 1 2\ninit q 0 0\ntarget q 3 4\n",
    );
    assert_eq!(run(&["solve", p(&f)]).0, 2);
    let (code, out, _) = run(&["solve", p(&f), "--permissive"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("verdict: coverable"));
}

#[test]
fn oracle_writes_basis() {
    let dir = tempfile::tempdir().unwrap();
    let (_, inst, _) = run(&["gen", "fig1"]);
    let f = write(dir.path(), "i", &inst);
    let b = dir.path().join("basis");
    let (code, out, _) = run(&["oracle", p(&f), "--basis-out", p(&b)]);
    assert_eq!((code, out.as_str()), (0, "verdict: coverable\n"));
    let basis = fs::read_to_string(b).unwrap();
    assert!(basis.lines().count() >= 1);
    assert!(basis.lines().all(|l| l.split_whitespace().count() == 3));
}

#[test]
fn blocks_on_fig2() {
    let dir = tempfile::tempdir().unwrap();
    let wit = dir.path().join("w");
    let (_, inst, _) = run(&["gen", "fig2", "--n", "1", "--witness-out", p(&wit)]);
    let f = write(dir.path(), "i", &inst);
    let (code, out, _) = run(&["blocks", p(&f), p(&wit)]);
    assert_eq!(code, 0);
    assert_eq!(out, "blocks: 8\n");
}

#[test]
fn gen_random_is_deterministic() {
    let a = run(&["gen", "random", "--seed", "9"]);
    let b = run(&["gen", "random", "--seed", "9"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
    assert!(a.1.starts_with("vass 2u"));
}

#[test]
fn fuzz_reports_agreement() {
    let (code, out, err) = run(&["fuzz", "--count", "20", "--seed", "3", "--threads", "2"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "verdict: agree\n");
    assert!(err.contains("20 instances"));
}

#[test]
fn binary_prints_witness() {
    let dir = tempfile::tempdir().unwrap();
    let (_, inst, _) = run(&["gen", "fig1"]);
    let f = write(dir.path(), "i", &inst);
    let o = Command::new(env!("CARGO_BIN_EXE_ucover"))
        .args(["solve", p(&f)])
        .env("UCOVER_MAX_WIDTH", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8(o.stdout).unwrap();
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("verdict: coverable"));
    assert!(lines.next().unwrap().starts_with("witness: "));
}

#[test]
fn env_budget_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let (_, inst, _) = run(&["gen", "fig1"]);
    let f = write(dir.path(), "i", &inst);
    let o = Command::new(env!("CARGO_BIN_EXE_ucover"))
        .args(["solve", p(&f)])
        .env("UCOVER_MAX_WIDTH", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
