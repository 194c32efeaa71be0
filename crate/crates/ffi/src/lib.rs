//! C ABI over `statecount`.
//!
//! Automata cross the boundary as opaque `ScAutomaton` handles. Every
//! fallible call returns an `ScStatus`; on failure `sc_last_error` returns
//! a message for the calling thread. Handles and strings produced here must
//! be released with `sc_automaton_free` and `sc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use statecount::io::{automaton_from_json, automaton_to_json, load_automaton, save_automaton};
use statecount::regex::compile_regex;
use statecount::simulate::run;
use statecount::transform::{determinize_with, equivalent_with, minimize, DeterminizeOptions};
use statecount::{optimize_nfa, Automaton, Error, Minimizer, StartKind};

/// Opaque automaton handle.
pub struct ScAutomaton(Automaton);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Document = 4,
    InvalidAutomaton = 5,
    CapExceeded = 6,
    Io = 7,
    InvalidArgument = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScStartKind {
    StartOfData = 1,
    AllInput = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScMinimizer {
    Brzozowski = 0,
    Hopcroft = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ScStats {
    pub state_count: usize,
    pub transition_count: usize,
    pub max_fanout: usize,
    pub avg_fanout: f64,
    pub accept_count: usize,
    pub start_count: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("no interior nul"));
}

fn status_of(err: &Error) -> ScStatus {
    match err {
        Error::Parse { .. } | Error::Class(_) | Error::TooLarge(_) => ScStatus::Parse,
        Error::Document { .. } | Error::Version { .. } => ScStatus::Document,
        Error::Invalid(_) | Error::Nondeterministic(_) => ScStatus::InvalidAutomaton,
        Error::CapExceeded { .. } => ScStatus::CapExceeded,
        Error::Io { .. } => ScStatus::Io,
        _ => ScStatus::InvalidArgument,
    }
}

struct Fail(ScStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ScStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ScStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ScStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(ScStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(ScStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a>(p: *const ScAutomaton, what: &str) -> Result<&'a Automaton, Fail> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| Fail(ScStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(ScStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_handle(out: *mut *mut ScAutomaton, a: Automaton) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(ScStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(Box::into_raw(Box::new(ScAutomaton(a))));
    Ok(())
}

fn opts(cap: usize) -> DeterminizeOptions {
    if cap == 0 {
        DeterminizeOptions::default()
    } else {
        DeterminizeOptions { cap }
    }
}

/// Message for the last failed call on this thread; empty after success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn sc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `regex` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_compile_regex(
    regex: *const c_char,
    start_kind: ScStartKind,
    out: *mut *mut ScAutomaton,
) -> ScStatus {
    guard(|| {
        let kind = match start_kind {
            ScStartKind::StartOfData => StartKind::StartOfData,
            ScStartKind::AllInput => StartKind::AllInput,
        };
        put_handle(out, compile_regex(text(regex, "regex")?, kind)?)
    })
}

/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_automaton_from_json(json: *const c_char, out: *mut *mut ScAutomaton) -> ScStatus {
    guard(|| put_handle(out, automaton_from_json(text(json, "json")?)?))
}

/// Serializes to a newly allocated string; release it with `sc_string_free`.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_automaton_to_json(a: *const ScAutomaton, out: *mut *mut c_char) -> ScStatus {
    guard(|| {
        let s = CString::new(automaton_to_json(handle(a, "automaton")?)).expect("JSON has no nul");
        put(out, s.into_raw())
    })
}

/// # Safety
/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_automaton_load(path: *const c_char, out: *mut *mut ScAutomaton) -> ScStatus {
    guard(|| put_handle(out, load_automaton(Path::new(text(path, "path")?))?))
}

/// # Safety
/// `a` must be a live handle; `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sc_automaton_save(a: *const ScAutomaton, path: *const c_char) -> ScStatus {
    guard(|| Ok(save_automaton(handle(a, "automaton")?, Path::new(text(path, "path")?))?))
}

/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_optimize(a: *const ScAutomaton, out: *mut *mut ScAutomaton) -> ScStatus {
    guard(|| put_handle(out, optimize_nfa(handle(a, "automaton")?)))
}

/// `cap` of 0 selects the default state cap.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_determinize(a: *const ScAutomaton, cap: usize, out: *mut *mut ScAutomaton) -> ScStatus {
    guard(|| put_handle(out, determinize_with(handle(a, "automaton")?, opts(cap))?.dfa))
}

/// `cap` of 0 selects the default state cap.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_minimize(
    a: *const ScAutomaton,
    minimizer: ScMinimizer,
    cap: usize,
    out: *mut *mut ScAutomaton,
) -> ScStatus {
    guard(|| {
        let m = match minimizer {
            ScMinimizer::Brzozowski => Minimizer::Brzozowski,
            ScMinimizer::Hopcroft => Minimizer::Hopcroft,
        };
        put_handle(out, minimize(handle(a, "automaton")?, m, opts(cap))?)
    })
}

/// Writes whether `a` and `b` accept the same language.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_equivalent(
    a: *const ScAutomaton,
    b: *const ScAutomaton,
    cap: usize,
    out: *mut bool,
) -> ScStatus {
    guard(|| put(out, equivalent_with(handle(a, "a")?, handle(b, "b")?, opts(cap))?))
}

/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_stats(a: *const ScAutomaton, out: *mut ScStats) -> ScStatus {
    guard(|| {
        let s = handle(a, "automaton")?.stats();
        put(
            out,
            ScStats {
                state_count: s.state_count,
                transition_count: s.transition_count,
                max_fanout: s.max_fanout,
                avg_fanout: s.avg_fanout,
                accept_count: s.accept_count,
                start_count: s.start_count,
            },
        )
    })
}

/// Simulates `a` over `len` bytes and writes the number of reports.
///
/// # Safety
/// `a` must be a live handle; `input` must point to `len` readable bytes
/// (it may be null when `len` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_simulate_report_count(
    a: *const ScAutomaton,
    input: *const u8,
    len: usize,
    out: *mut usize,
) -> ScStatus {
    guard(|| {
        let bytes: &[u8] = if len == 0 {
            &[]
        } else if input.is_null() {
            return Err(Fail(ScStatus::NullPointer, "input is null".into()));
        } else {
            std::slice::from_raw_parts(input, len)
        };
        put(out, run(handle(a, "automaton")?, bytes).reports.len())
    })
}

/// # Safety
/// `a` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_automaton_free(a: *mut ScAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
