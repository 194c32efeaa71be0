use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use statecount::io::{load_automaton, load_patterns};
use statecount::regex::compile_regex;
use statecount::transform::minimize_brzozowski;
use statecount::{determinize, optimize_nfa, StartKind};

fn statecount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_statecount")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = statecount(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn plumbing_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let nfa = dir.path().join("nfa.json");
    let opt = dir.path().join("opt.json");
    let dfa = dir.path().join("dfa.json");
    let min = dir.path().join("min.json");
    ok(&["compile", "--regex", "(a|b)*a(a|b){3}", "--start-kind", "start-of-data", "--out", p(&nfa)]);
    ok(&["optimize", p(&nfa), "--out", p(&opt)]);
    ok(&["determinize", p(&nfa), "--out", p(&dfa)]);
    ok(&["minimize", p(&nfa), "--minimizer", "hopcroft", "--out", p(&min)]);

    let lib = compile_regex("(a|b)*a(a|b){3}", StartKind::StartOfData).unwrap();
    assert_eq!(load_automaton(&nfa).unwrap(), lib);
    assert_eq!(load_automaton(&opt).unwrap().state_count(), optimize_nfa(&lib).state_count());
    assert_eq!(load_automaton(&dfa).unwrap(), determinize(&lib).unwrap());
    let cli_min = load_automaton(&min).unwrap();
    assert!(cli_min.isomorphic(&minimize_brzozowski(&lib).unwrap()).unwrap());
    assert_eq!(cli_min.state_count(), 16);

    let stats: serde_json::Value = serde_json::from_str(&ok(&["stats", p(&min)])).unwrap();
    assert_eq!(stats["state_count"], 16);
}

#[test]
fn equivalent_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let opt = dir.path().join("opt.json");
    let other = dir.path().join("other.json");
    ok(&["compile", "--regex", "a(b|c)*", "--start-kind", "all-input", "--out", p(&a)]);
    ok(&["optimize", p(&a), "--out", p(&opt)]);
    ok(&["compile", "--regex", "a(b|c)+", "--start-kind", "all-input", "--out", p(&other)]);

    let same = statecount(&["equivalent", p(&a), p(&opt)]);
    assert_eq!(same.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&same.stdout).trim(), "equivalent");
    let differ = statecount(&["equivalent", p(&a), p(&other)]);
    assert_eq!(differ.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&differ.stdout).trim(), "not equivalent");
}

#[test]
fn seeded_commands_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let pats = dir.path().join("pats.json");
    let args = ["generate", "--kind", "hamming", "--seed", "9", "--start-kind", "start-of-data", "--count", "4"];
    let first = ok(&args);
    assert_eq!(first, ok(&args));
    fs::write(&pats, &first).unwrap();
    assert_eq!(load_patterns(&pats).unwrap().patterns.len(), 4);

    for run in ["one", "two"] {
        let csv = dir.path().join(format!("{run}.csv"));
        ok(&["report-per-pattern", p(&pats), "--seed", "42", "--out", p(&csv)]);
    }
    for ext in ["csv", "plot.tsv", "manifest.json"] {
        let a = fs::read(dir.path().join(format!("one.{ext}"))).unwrap();
        let b = fs::read(dir.path().join(format!("two.{ext}"))).unwrap();
        assert_eq!(a, b, "{ext} differs");
    }
    let csv = fs::read_to_string(dir.path().join("one.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn missing_seed_is_a_usage_error() {
    let out = statecount(&["generate", "--kind", "dotstar", "--start-kind", "all-input"]);
    assert_eq!(out.status.code(), Some(2));
    let out = statecount(&["report-merge", "whatever.json", "--out", "x.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one_with_a_message() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"version": 1, "states": 2, "starts": [], "accepts": [5], "edges": []}"#).unwrap();
    let out = statecount(&["stats", p(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
    let out = statecount(&["compile", "--regex", "(a", "--start-kind", "start-of-data"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_prints_trace_lines() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    ok(&["compile", "--regex", "ab", "--start-kind", "all-input", "--out", p(&a)]);
    let trace = ok(&["simulate", p(&a), "--text", "abab"]);
    let lines: Vec<&str> = trace.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].ends_with("\t-"));
    assert!(!lines[1].ends_with("\t-"));
    assert!(lines[3].starts_with("3\t"));
}
