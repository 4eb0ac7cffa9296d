//! End-to-end tests of the `slodowy` binary: exit codes, output formats,
//! the CSV golden file and cache transparency.

use std::path::Path;
use std::process::{Command, Output};

use slodowy_cli::{SliceOutput, CSV_HEADER};

fn slodowy(cache: &Path) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_slodowy"));
    cmd.env("SLODOWY_CACHE_DIR", cache);
    cmd
}

fn run(cache: &Path, args: &[&str]) -> Output {
    slodowy(cache).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

#[test]
fn classify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["classify", "--algebra", "so", "--dim", "14", "--partition", "3,3,2,2,2,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: NotPolynomial"));
    let o = run(dir.path(), &["classify", "--algebra", "so", "--dim", "15", "--partition", "5,3,3,2,2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"]["tag"], "GoodVeryGood");
    assert_eq!(v["defect"]["defect"], 0);
}

#[test]
fn invalid_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["classify", "--algebra", "so", "--dim", "4", "--partition", "2,1,1"][..],
        &["classify", "--algebra", "so", "--dim", "9", "--partition", "3,3,1"],
        &["classify", "--algebra", "sp", "--dim", "5", "--partition", "3,1,1"],
        &["classify", "--algebra", "so", "--dim", "7", "--partition", "1,3,3"],
        &["classify", "--algebra", "gl", "--dim", "3", "--partition", "3"],
        &["slice", "--algebra", "so", "--dim", "16", "--partition", "3,3,2,2,2,2,1,1"],
        &["slice", "--algebra", "so", "--dim", "10", "--partition", "3,3,2,2", "--relation", "q4*q5"],
        &["slice", "--algebra", "so", "--dim", "10", "--partition", "3,3,2,2", "--relation", "q8"],
        &["table", "--algebra", "sp", "--max-rank", "3"],
        &["verify", "--example", "nope"],
    ] {
        let o = run(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn unwritable_table_path_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("t.csv");
    let o = run(dir.path(), &["table", "--algebra", "so", "--max-rank", "3", "--out", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_relation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["slice", "--algebra", "so", "--dim", "10", "--partition", "3,3,2,2", "--relation", "q4^2 + q3*q5^2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fails"));
}

#[test]
fn table_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = run(dir.path(), &["table", "--algebra", "so", "--max-rank", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, golden("table_r4.csv"));
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    // Every orbit up to rank four is good.
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let verdicts: Vec<String> = reader.records().map(|r| r.unwrap()[7].to_string()).collect();
    assert_eq!(verdicts.len(), 44);
    assert!(verdicts.iter().all(|v| v.starts_with("Good")));
}

#[test]
fn table_rank_five_and_six_exceptions() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["table", "--algebra", "so", "--max-rank", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut bad: Vec<(String, String, String)> = reader
        .records()
        .map(|r| r.unwrap())
        .filter(|r| !r[7].starts_with("Good"))
        .map(|r| (r[0].to_string(), r[1].to_string(), r[2].to_string()))
        .collect();
    bad.sort();
    let expected = [
        ("5", "B", "(3,3,2,2,1)"),
        ("5", "D", "(3,3,2,2)"),
        ("6", "B", "(3,3,2,2,1,1,1)"),
        ("6", "B", "(4,4,2,2,1)"),
        ("6", "B", "(5,3,2,2,1)"),
        ("6", "D", "(3,3,2,2,1,1)"),
        ("6", "D", "(5,3,2,2)"),
    ];
    let expected: Vec<(String, String, String)> =
        expected.iter().map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string())).collect();
    assert_eq!(bad, expected);
    assert!(text.contains("1,1,2,2,5"));
}

#[test]
fn slice_cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["slice", "--algebra", "so", "--dim", "10", "--partition", "3,3,2,2", "--verify-relations", "--json"];
    let first = run(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, 2, "one report and one relation entry");
    let second = run(dir.path(), &args);
    let mut uncached_args = args.to_vec();
    uncached_args.push("--no-cache");
    let uncached = run(dir.path(), &uncached_args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, uncached.stdout);
    let out: SliceOutput = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(out.report.deltas, vec![1, 2, 2, 3, 2]);
    assert_eq!(out.report.dim_ge, 17);
    assert!(out.relations.iter().all(|r| r.holds) && out.relations.len() == 1);
    // A different seed is a different key.
    let mut reseeded = args.to_vec();
    reseeded.extend(["--seed", "7"]);
    assert_eq!(run(dir.path(), &reseeded).status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 4);
}

#[test]
fn corrupted_cache_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["slice", "--algebra", "so", "--dim", "7", "--partition", "7", "--json"];
    let first = run(dir.path(), &args);
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(entry.unwrap().path(), "{ not json").unwrap();
    }
    let second = run(dir.path(), &args);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn regular_so7_is_independent() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["slice", "--algebra", "so", "--dim", "7", "--partition", "7", "--jacobian"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("jacobian rank: 3 of 3 (independent)"));
}

#[test]
fn verify_small_examples() {
    let dir = tempfile::tempdir().unwrap();
    for ex in ["e7_4", "e5_21", "tca3_so12"] {
        let o = run(dir.path(), &["verify", "--example", ex]);
        assert_eq!(o.status.code(), Some(0), "{ex}: {}", stdout(&o));
        assert!(stdout(&o).lines().all(|l| !l.starts_with("FAIL")));
    }
}

#[test]
fn fixtures_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["fixtures", "--check", "exceptional"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("22 rows consistent"));
    assert!(text.contains("G2 row 4 A1: Σ = 5, Σ' = 5 (equal)"));
}

#[test]
fn default_mode_falls_back_when_expansion_is_too_large() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["slice", "--algebra", "so", "--dim", "7", "--partition", "1,1,1,1,1,1,1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let out: SliceOutput = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(serde_json::to_value(out.report.mode).unwrap(), "randomized");
    assert_eq!(out.report.deltas, vec![2, 4, 6]);
    assert!(out.report.independent);
    let forced = run(dir.path(), &["slice", "--algebra", "so", "--dim", "7", "--partition", "1,1,1,1,1,1,1", "--identical"]);
    assert_eq!(forced.status.code(), Some(2));
}
