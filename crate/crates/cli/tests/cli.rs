use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coinflip"))
        .args(args)
        .env_remove("COINFLIP_THREADS")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn usage_errors_exit_one_with_a_single_line() {
    for args in [
        &["expect", "HXT"][..],
        &["seq", "fib:0", "--upto", "3"],
        &["sum", "id2", "--k", "2"],
        &["sum", "id7:1"],
        &["simulate", "--pattern", "HH", "--trials", "0"],
        &["scan", "--max-len", "0"],
        &["scan", "--max-len", "2", "--threads", "0"],
        &["expect", "1,9", "-c", "6"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = stderr(&out);
        assert!(err.starts_with("error: "), "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn clap_errors_exit_one() {
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["count", "HH"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn every_command_emits_schema_one() {
    for args in [
        &["expect", "HTH", "--json"][..],
        &["count", "HT", "--upto", "4", "--json"],
        &["seq", "fib:3", "--upto", "5", "--json"],
        &["sum", "alt:3", "--N", "40", "--json"],
        &["simulate", "--pattern", "HT", "--trials", "10", "--json"],
        &["scan", "--max-len", "3", "--json"],
        &["inspect", "HHT", "--json"],
        &["props", "--max", "1", "--upto", "10", "--json"],
    ] {
        assert_eq!(json(args)["schema"], 1, "{args:?}");
    }
}

#[test]
fn expect_methods_agree_on_die_patterns() {
    let v = json(&["expect", "0,1,0", "-c", "4", "--method", "all", "--json"]);
    assert_eq!(v["markov"], "68");
    assert_eq!(v["conway"], "68");
    assert_eq!(v["closed"], Value::Null);
    assert_eq!(v["agree"], true);
}

#[test]
fn sum_accepts_flag_and_inline_parameters() {
    let a = json(&["sum", "id3", "--k", "1", "--m", "2", "--N", "60", "--json"]);
    let b = json(&["sum", "id3:1,2", "--N", "60", "--json"]);
    assert_eq!(a, b);
    assert_eq!(a["target"], "40");
    assert_eq!(a["within_bound"], true);
}

#[test]
fn thread_count_does_not_change_output() {
    let base = run(&["scan", "--max-len", "8", "--json"]).stdout;
    for t in ["1", "3"] {
        let out = Command::new(env!("CARGO_BIN_EXE_coinflip"))
            .args(["scan", "--max-len", "8", "--json"])
            .env("COINFLIP_THREADS", t)
            .output()
            .unwrap();
        assert_eq!(out.stdout, base, "threads {t}");
    }
    let a = run(&[
        "simulate",
        "--pattern",
        "HTT",
        "--trials",
        "5000",
        "--seed",
        "3",
        "--threads",
        "1",
    ]);
    let b = run(&[
        "simulate",
        "--pattern",
        "HTT",
        "--trials",
        "5000",
        "--seed",
        "3",
        "--threads",
        "4",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn scan_writes_json_and_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("report.json");
    let csv_path = dir.path().join("report.csv");
    let out = run(&[
        "scan",
        "--max-len",
        "4",
        "--out",
        json_path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(report["summary"]["patterns_scanned"], 30);
    assert_eq!(report["records"].as_array().unwrap().len(), 30);
    let mut csv = csv::Reader::from_path(&csv_path).unwrap();
    let headers = csv.headers().unwrap().clone();
    assert_eq!(&headers[0], "pattern");
    let rows: Vec<csv::StringRecord> = csv.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 30);
    let htht = rows.iter().find(|r| &r[0] == "HTHT").unwrap();
    assert_eq!(&htht[2], "20");
    assert_eq!(&htht[3], "2");
    assert_eq!(&htht[4], "holds");
}

#[test]
fn closed_pipe_is_not_an_error() {
    use std::io::Read;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_coinflip"))
        .args(["seq", "fib:2", "--upto", "5000"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut first = [0u8; 16];
    child.stdout.take().unwrap().read_exact(&mut first).unwrap();
    // stdout is dropped here, closing the pipe early
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(
        out.stderr.is_empty(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
