use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn turan3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_turan3"))
        .args(args)
        .env_remove("TURAN3_THREADS")
        .env_remove("TURAN3_TIME_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_line(out: &Output) -> Value {
    serde_json::from_str(stdout(out).lines().next().expect("one line")).expect("json record")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn search_emits_a_result_record() {
    let out = turan3(&["search", "--n", "7", "--forbid", "P", "--enumerate"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = json_line(&out);
    assert_eq!(rec["status"], "Exact");
    assert_eq!(rec["value"], 20);
    assert_eq!(rec["witness_count"], 1);
    assert_eq!(rec["witnesses"][0].as_array().unwrap().len(), 20);
}

#[test]
fn search_with_flags_and_requirement() {
    let out = turan3(&["search", "--n", "7", "--forbid", "P,C", "--require", "M"]);
    assert_eq!(json_line(&out)["value"], 10);
    let out = turan3(&["search", "--n", "7", "--forbid", "M", "--flags", "intersecting,no_common_vertex"]);
    assert_eq!(json_line(&out)["value"], 13);
}

#[test]
fn node_limit_exits_with_unknown() {
    let out = turan3(&["search", "--n", "8", "--forbid", "P", "--node-limit", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_line(&out)["status"], "LowerBoundOnly");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["search", "--n", "7", "--forbid", "Q"][..],
        &["search", "--n", "7", "--flags", "bogus"],
        &["frobnicate"],
        &["search", "--n", "40"],
        &["construct", "comet"],
    ] {
        let out = turan3(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn environment_sets_thread_count() {
    let out = Command::new(env!("CARGO_BIN_EXE_turan3"))
        .args(["search", "--n", "8", "--forbid", "P"])
        .env("TURAN3_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(json_line(&out)["value"], 21);
    let out = Command::new(env!("CARGO_BIN_EXE_turan3"))
        .args(["search", "--n", "8"])
        .env("TURAN3_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn turan_queries() {
    let out = turan3(&["turan", "--n", "8", "--forbid", "P", "--order", "2"]);
    let rec = json_line(&out);
    assert_eq!(rec["value"], 20);
    assert_eq!(rec["source"], "computed");
    let out = turan3(&["turan", "--n", "6", "--forbid", "P,C", "--require", "M"]);
    assert_eq!(json_line(&out)["value"], 8);
    let out = turan3(&["turan", "--n", "6", "--forbid", "M", "--order", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn table_as_json_and_csv() {
    let out = turan3(&["table", "--name", "ex3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    let rec = json_line(&out);
    assert_eq!(rec["row"]["n"], 12);
    assert_eq!(rec["row"]["cited_value"], 32);
    assert_eq!(rec["row"]["agree"], true);

    let out = turan3(&["table", "--name", "ex1", "--format", "csv", "--search-max-n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,cited_value,construction_value,search_value,search_status,agree"));
    assert_eq!(lines.next(), Some("1,0,0,0,Exact,true"));
    assert!(text.lines().any(|l| l == "6,20,20,20,Exact,true"));
    assert!(text.lines().any(|l| l == "8,21,21,,skipped,true"));
}

#[test]
fn construct_check_and_iso() {
    let dir = tempfile::tempdir().unwrap();
    let comet = dir.path().join("co13.hg3");
    let out = turan3(&["construct", "comet", "--n", "13", "-o", path(&comet)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&comet).unwrap();
    assert!(text.starts_with("hg3 n=13 m=40\n"));
    assert_eq!(text.lines().count(), 41);

    let out = turan3(&["construct", "star", "--n", "8"]);
    assert!(stdout(&out).starts_with("hg3 n=8 m=21\n"));
    let star = dir.path().join("star8.hg3");
    std::fs::write(&star, stdout(&out)).unwrap();
    assert_eq!(stdout(&turan3(&["check", "--file", path(&star), "--pattern", "P"])), "absent\n");
    assert_eq!(stdout(&turan3(&["check", "--file", path(&star), "--pattern", "P2"])), "present\n");

    let k61 = dir.path().join("k61.hg3");
    let s7 = dir.path().join("s7.hg3");
    turan3(&["construct", "clique-union", "--sizes", "6,1", "-o", path(&k61)]);
    turan3(&["construct", "star", "--n", "7", "-o", path(&s7)]);
    let out = turan3(&["iso", "--a", path(&s7), "--b", path(&k61)]);
    assert_eq!(stdout(&out), "not-isomorphic\nnone\n");
    let k6 = dir.path().join("k6.hg3");
    turan3(&["construct", "complete", "--n", "6", "-o", path(&k6)]);
    let out = turan3(&["iso", "--a", path(&k6), "--b", path(&k61)]);
    assert_eq!(stdout(&out), "not-isomorphic\nembeds\n");
    let out = turan3(&["iso", "--a", path(&k61), "--b", path(&k61)]);
    assert_eq!(stdout(&out), "isomorphic\nembeds\n");
}

#[test]
fn malformed_graph_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.hg3");
    std::fs::write(&bad, "hg3 n=5 m=2\n0 1 2\n0 1 2\n").unwrap();
    let out = turan3(&["check", "--file", path(&bad), "--pattern", "P"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.hg3"));
}

#[test]
fn ramsey_verify_prints_a_valid_proof() {
    let out = turan3(&["ramsey", "verify", "--r", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let proof = json_line(&out);
    assert_eq!(proof["valid"], true);
    assert_eq!(proof["n"], 12);
    let kinds: Vec<&str> = proof["steps"].as_array().unwrap().iter().map(|s| s["kind"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"PartitionArgument"));
    let out = turan3(&["ramsey", "verify", "--r", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ramsey_witness_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("w.col3");
    let out = turan3(&["ramsey", "witness", "--n", "7", "--colors", "2", "--pattern", "P", "-o", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_line(&out)["outcome"], "found");
    assert!(std::fs::read_to_string(&file).unwrap().starts_with("col3 n=7 r=2\n"));
    let out = turan3(&["ramsey", "check", "--file", path(&file), "--pattern", "P"]);
    assert_eq!(stdout(&out), "absent\n");
    let out = turan3(&["ramsey", "witness", "--n", "8", "--colors", "2", "--pattern", "P"]);
    assert_eq!(json_line(&out)["outcome"], "none-exists");
}

#[test]
fn record_captures_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let record = dir.path().join("run.json");
    let out = turan3(&["search", "--n", "6", "--forbid", "C", "--record", path(&record)]);
    assert_eq!(out.status.code(), Some(0));
    let rec: Value = serde_json::from_str(&std::fs::read_to_string(&record).unwrap()).unwrap();
    assert_eq!(rec["outcome"]["value"], 10);
    assert_eq!(rec["exit_code"], 0);
    assert_eq!(rec["config"]["threads"], 1);
    assert!(rec["command_line"].as_array().unwrap().iter().any(|a| a == "--forbid"));
    assert_eq!(rec["outcome"], json_line(&out));
}
