use std::process::Command;

use serde_json::{json, Value};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("scholl").chain(args.iter().copied());
    let code = scholl::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn trace_both_methods_agree_at_five() {
    let v = run_json(&["trace", "--n", "2", "--i", "1", "--p", "5", "--method", "both"]);
    let row = &v["results"][0];
    assert_eq!(row["agree"], json!(true));
    assert_eq!(row["brute"]["coeffs"], json!([-6]));
    assert_eq!(row["greene"]["coeffs"], json!([-6]));
    assert!(row.get("ms").is_none());
}

#[test]
fn timing_adds_milliseconds() {
    let v = run_json(&["--timing", "trace", "--n", "3", "--i", "1", "--p", "7", "--method", "brute"]);
    assert!(v["results"][0]["ms"].is_number());
}

#[test]
fn asd_solve_prints_canonical_quartic() {
    let (code, out, _) = run(&["asd", "solve", "--p", "7"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{\"A\":[8,-279,2744,117649],\"p\":7}\n");
}

#[test]
fn induce_display_in_json_and_text() {
    let v = run_json(&["induce", "--n", "2", "--p", "5"]);
    assert_eq!(v["display"], json!("x^2 + 6x + 25"));
    assert_eq!(v["product"], json!([25, 6, 1]));
    let (code, out, _) = run(&["--format", "text", "induce", "--n", "2", "--p", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "x^2 + 6x + 25");
}

#[test]
fn eta_csv_has_series_column() {
    let (code, out, _) = run(&["--format", "csv", "qexp", "eta", "--spec", "1:-8,2:48,4:-16", "--prec", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines[0], "series,exponent_num,exponent_den,num,den");
    assert_eq!(lines[1], "eta,1,1,1,1");
    assert_eq!(lines.len(), 4);
}

#[test]
fn asd_verify_table_row() {
    let v = run_json(&["asd", "verify", "--p", "5", "--r-min", "0", "--r-max", "1"]);
    assert_eq!(v["ok"], json!(true));
}

#[test]
fn asd_verify_wrong_quartic_exits_one() {
    let (code, out, _) = run(&["asd", "verify", "--p", "5", "--a", "1,2,3,4", "--r-min", "0", "--r-max", "0"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ok"], json!(false));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["places", "--n", "5", "--p", "4"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["trace", "--n", "2", "--p", "5"]).0, 2);
    assert_eq!(run(&["qexp", "eta", "--spec", "1-8", "--prec", "3"]).0, 2);
    assert_eq!(run(&["sweep", "--criteria", "13"]).0, 2);
    assert_eq!(run(&["trace", "--n", "5", "--i", "1", "--p", "11", "--place", "9"]).0, 2);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("asd"));
}

#[cfg(not(feature = "fetch"))]
#[test]
fn fetch_without_feature_is_a_usage_error() {
    let (code, _, err) = run(&["fetch-newform", "--label", "9.4.a.a"]);
    assert_eq!(code, 2);
    assert!(err.contains("--features fetch"));
}

#[test]
fn cache_hit_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "charpoly", "--n", "3", "--i", "1", "--p", "7"];
    let (c1, first, _) = run(&args);
    let (c2, second, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(first, second);
    let log = std::fs::read_to_string(dir.path().join("scholl-cache.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 1);

    let (c3, third, _) = run(&["--cache-dir", d, "--verify-cache", "charpoly", "--n", "3", "--i", "1", "--p", "7"]);
    assert_eq!(c3, 0);
    assert_eq!(third, first);
}

#[test]
fn verify_cache_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "induce", "--n", "2", "--p", "5"];
    assert_eq!(run(&args).0, 0);
    let path = dir.path().join("scholl-cache.jsonl");
    let log = std::fs::read_to_string(&path).unwrap().replace("25,6,1", "25,7,1");
    std::fs::write(&path, log).unwrap();
    let (code, _, err) = run(&["--cache-dir", d, "--verify-cache", "induce", "--n", "2", "--p", "5"]);
    assert_eq!(code, 1);
    assert!(err.contains("differs"));
}

#[test]
fn unusable_cache_dir_warns_and_still_answers() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, b"x").unwrap();
    let bad = blocker.join("sub");
    let (code, out, err) = run(&["--cache-dir", bad.to_str().unwrap(), "asd", "solve", "--p", "7"]);
    assert_eq!(code, 0);
    assert!(out.contains("117649"));
    assert!(err.contains("warning"));
}

#[test]
fn binary_wires_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_scholl");
    let ok = Command::new(bin).args(["induce", "--n", "2", "--p", "5"]).env_remove("SCHOLL_CACHE").output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["places", "--n", "5", "--p", "4"]).env_remove("SCHOLL_CACHE").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
