use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const WORKED: &str = r#"{"problem":"mtuples","sets":[[1,3,7],[2,5],[3,9]],"bound":17}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_approxcount"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn write_lines(dir: &Path, name: &str, lines: &[&str]) -> String {
    let path = dir.join(name);
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    path.to_str().unwrap().to_owned()
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn count_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_lines(dir.path(), "in.jsonl", &[WORKED]);

    let approx = run(&[
        "count",
        "--input",
        &input,
        "--mode",
        "fptas",
        "--epsilon",
        "7",
    ]);
    assert!(approx.status.success());
    let rec = &records(&approx)[0];
    assert_eq!(rec["count"], "12");
    assert_eq!(rec["problem"], "mtuples");
    assert_eq!(rec["set_sizes"], serde_json::json!([4, 4, 2]));

    let exact = run(&["count", "--input", &input, "--mode", "exact-dp"]);
    assert_eq!(records(&exact)[0]["count"], "3");
}

#[test]
fn count_reads_stdin_and_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.jsonl");
    let line = r#"{"problem":"knapsack","weights":[5],"capacity":4}"#;
    let res = run_stdin(
        &[
            "count",
            "--input",
            "-",
            "--mode",
            "exact-brute",
            "--out",
            out.to_str().unwrap(),
        ],
        line,
    );
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let rec: Value = serde_json::from_str(fs::read_to_string(&out).unwrap().trim()).unwrap();
    assert_eq!(rec["count"], "1");
}

#[test]
fn string_numbers_are_accepted() {
    let line = r#"{"problem":"contingency2","row_sums":["2","2"],"col_sums":[2,2]}"#;
    let res = run_stdin(&["count", "--input", "-", "--mode", "exact-dp"], line);
    assert!(res.status.success());
    assert_eq!(records(&res)[0]["count"], "3");
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    assert_eq!(run(&["count", "--mode", "fptas"]).status.code(), Some(2));
    let missing_eps = run_stdin(&["count", "--input", "-", "--mode", "fptas"], WORKED);
    assert_eq!(missing_eps.status.code(), Some(2));
    let bad = run_stdin(
        &["count", "--input", "-", "--mode", "exact-dp"],
        r#"{"problem":"nope"}"#,
    );
    assert_eq!(bad.status.code(), Some(2));
    let strong_contingency = run_stdin(
        &[
            "count",
            "--input",
            "-",
            "--mode",
            "strong-fptas",
            "--epsilon",
            "0.5",
        ],
        r#"{"problem":"contingency2","row_sums":[2,2],"col_sums":[2,2]}"#,
    );
    assert_eq!(strong_contingency.status.code(), Some(2));
}

#[test]
fn oversized_exact_count_exits_with_three() {
    let res = run_stdin(
        &[
            "count",
            "--input",
            "-",
            "--mode",
            "exact-brute",
            "--enum-cap",
            "2",
        ],
        WORKED,
    );
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let args = [
        "gen",
        "--problem",
        "knapsack",
        "--seed",
        "9",
        "--trials",
        "5",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(records(&first).len(), 5);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.jsonl");
    fs::write(&path, &first.stdout).unwrap();
    let counted = run(&[
        "count",
        "--input",
        path.to_str().unwrap(),
        "--mode",
        "exact-dp",
    ]);
    assert!(counted.status.success());
    assert_eq!(records(&counted).len(), 5);
}

#[test]
fn verify_random_instances_passes() {
    let res = run(&[
        "verify",
        "--problem",
        "contingency2",
        "--epsilon",
        "0.5",
        "--trials",
        "20",
        "--seed",
        "4",
    ]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let summary: Value = serde_json::from_slice(&res.stdout).unwrap();
    assert!(summary.is_object());
}

#[test]
fn verify_file_passes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_lines(
        dir.path(),
        "in.jsonl",
        &[
            WORKED,
            r#"{"problem":"knapsack","weights":[3,4,5],"capacity":8}"#,
        ],
    );
    let res = run(&["verify", "--input", &input, "--epsilon", "1/3"]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    let res = run(&[
        "bench",
        "--problem",
        "mtuples",
        "--scales",
        "0,3",
        "--epsilon",
        "0.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let text = fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "algorithm,size,scale,epsilon,count,oracle_calls,elapsed_ms,set_size_max"
    );
    // exact, fptas and strong-fptas rows at each of two scales
    assert_eq!(lines.count(), 6);
}
