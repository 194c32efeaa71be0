use std::ffi::{CStr, CString};
use std::ptr;

use statecount_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sc_last_error()) }.to_string_lossy().into_owned()
}

unsafe fn compile(re: &str, kind: ScStartKind) -> *mut ScAutomaton {
    let mut out = ptr::null_mut();
    assert_eq!(sc_compile_regex(cstr(re).as_ptr(), kind, &mut out), ScStatus::Ok);
    assert!(!out.is_null());
    out
}

#[test]
fn pipeline_through_handles() {
    unsafe {
        let nfa = compile("(a|b)*a(a|b){2}", ScStartKind::StartOfData);
        let mut opt = ptr::null_mut();
        assert_eq!(sc_optimize(nfa, &mut opt), ScStatus::Ok);
        let mut dfa = ptr::null_mut();
        assert_eq!(sc_determinize(opt, 0, &mut dfa), ScStatus::Ok);
        let mut min_b = ptr::null_mut();
        let mut min_h = ptr::null_mut();
        assert_eq!(sc_minimize(dfa, ScMinimizer::Brzozowski, 0, &mut min_b), ScStatus::Ok);
        assert_eq!(sc_minimize(dfa, ScMinimizer::Hopcroft, 0, &mut min_h), ScStatus::Ok);

        let mut stats = ScStats::default();
        assert_eq!(sc_stats(min_b, &mut stats), ScStatus::Ok);
        assert_eq!(stats.state_count, 8);
        assert_eq!(sc_stats(min_h, &mut stats), ScStatus::Ok);
        assert_eq!(stats.state_count, 8);

        let mut same = false;
        assert_eq!(sc_equivalent(nfa, min_b, 0, &mut same), ScStatus::Ok);
        assert!(same);

        let mut reports = 0usize;
        let input = b"bbaab";
        assert_eq!(sc_simulate_report_count(min_b, input.as_ptr(), input.len(), &mut reports), ScStatus::Ok);
        assert_eq!(reports, 1);

        for h in [nfa, opt, dfa, min_b, min_h] {
            sc_automaton_free(h);
        }
    }
}

#[test]
fn json_round_trip_and_files() {
    unsafe {
        let a = compile("ab|cd", ScStartKind::AllInput);
        let mut json = ptr::null_mut();
        assert_eq!(sc_automaton_to_json(a, &mut json), ScStatus::Ok);
        let mut b = ptr::null_mut();
        assert_eq!(sc_automaton_from_json(json, &mut b), ScStatus::Ok);
        sc_string_free(json);

        let dir = tempfile::tempdir().unwrap();
        let path = cstr(dir.path().join("a.json").to_str().unwrap());
        assert_eq!(sc_automaton_save(b, path.as_ptr()), ScStatus::Ok);
        let mut c = ptr::null_mut();
        assert_eq!(sc_automaton_load(path.as_ptr(), &mut c), ScStatus::Ok);
        let mut same = false;
        assert_eq!(sc_equivalent(a, c, 0, &mut same), ScStatus::Ok);
        assert!(same);
        for h in [a, b, c] {
            sc_automaton_free(h);
        }
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(sc_compile_regex(cstr("(ab").as_ptr(), ScStartKind::StartOfData, &mut out), ScStatus::Parse);
        assert!(out.is_null());
        assert!(last_error().contains("unclosed group"));

        assert_eq!(sc_compile_regex(ptr::null(), ScStartKind::StartOfData, &mut out), ScStatus::NullPointer);

        let doc = r#"{"version":1,"states":2,"starts":[{"id":0,"kind":"start_of_data"}],"accepts":[1],"edges":[{"src":0,"dst":1,"class":""}]}"#;
        assert_eq!(sc_automaton_from_json(cstr(doc).as_ptr(), &mut out), ScStatus::Document);
        assert!(last_error().contains("empty symbol class"));

        let missing = cstr("/nonexistent/statecount.json");
        assert_eq!(sc_automaton_load(missing.as_ptr(), &mut out), ScStatus::Io);

        let big = compile("(a|b)*a(a|b){6}", ScStartKind::StartOfData);
        assert_eq!(sc_determinize(big, 16, &mut out), ScStatus::CapExceeded);
        assert!(last_error().contains("exceeded cap of 16"));

        let nfa = compile("a|ab", ScStartKind::StartOfData);
        let mut stats = ScStats::default();
        assert_eq!(sc_stats(nfa, &mut stats), ScStatus::Ok);
        assert_eq!(last_error(), "");
        assert_eq!(sc_stats(nfa, ptr::null_mut()), ScStatus::NullPointer);

        sc_automaton_free(big);
        sc_automaton_free(nfa);
        sc_automaton_free(ptr::null_mut());
        sc_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_exports() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/statecount.h")).unwrap();
    for sym in [
        "sc_last_error",
        "sc_compile_regex",
        "sc_automaton_from_json",
        "sc_automaton_to_json",
        "sc_automaton_load",
        "sc_automaton_save",
        "sc_optimize",
        "sc_determinize",
        "sc_minimize",
        "sc_equivalent",
        "sc_stats",
        "sc_simulate_report_count",
        "sc_automaton_free",
        "sc_string_free",
        "typedef struct ScAutomaton ScAutomaton",
    ] {
        assert!(header.contains(sym), "{sym} missing from header");
    }
}
