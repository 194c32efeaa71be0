//! JSON documents for automata and pattern sets, and atomic file writes.
//!
//! Automaton document, version 1:
//!
//! ```json
//! {
//!   "version": 1,
//!   "states": 3,
//!   "starts": [{"id": 0, "kind": "start_of_data"}],
//!   "accepts": [2, {"id": 1, "pattern_id": 4}],
//!   "edges": [{"src": 0, "dst": 1, "class": "a"}, {"src": 1, "dst": 2, "class": "[b-d]"}],
//!   "epsilon": [{"src": 0, "dst": 2}],
//!   "deterministic": false,
//!   "component_labels": [0, 0, 0]
//! }
//! ```
//!
//! `class` takes the regex character-class syntax (`a`, `.`, `[^\n]`,
//! `\x00`) or a 64-digit hex bitset with byte 255 as the most significant
//! bit. `epsilon`, `deterministic` and `component_labels` are optional.
//! Unknown fields are rejected.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::automaton::{Automaton, AutomatonBuilder, StartKind, StateId};
use crate::error::{Error, Result};
use crate::generators::Pattern;
use crate::symbol::SymbolClass;

pub const DOCUMENT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StartDoc {
    id: u32,
    kind: StartKind,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AcceptDoc {
    Id(u32),
    Attributed {
        id: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pattern_id: Option<u32>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    src: u32,
    dst: u32,
    class: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EpsilonDoc {
    src: u32,
    dst: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonDoc {
    version: u64,
    states: usize,
    starts: Vec<StartDoc>,
    accepts: Vec<AcceptDoc>,
    edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    epsilon: Vec<EpsilonDoc>,
    #[serde(default)]
    deterministic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    component_labels: Option<Vec<u32>>,
}

/// Pattern set document: rules plus the start kind they are compiled with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternSetDocument {
    pub version: u64,
    pub start_kind: StartKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub patterns: Vec<Pattern>,
}

impl PatternSetDocument {
    pub fn new(start_kind: StartKind, seed: Option<u64>, patterns: Vec<Pattern>) -> Self {
        PatternSetDocument { version: DOCUMENT_VERSION, start_kind, seed, patterns }
    }
}

fn doc_err(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Document { pointer: pointer.into(), message: message.into() }
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => {}
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn decode<T: DeserializeOwned>(text: &str) -> Result<T> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| doc_err("/", format!("malformed JSON at line {} column {}: {e}", e.line(), e.column())))?;
    match value.get("version") {
        Some(v) => match v.as_u64() {
            Some(DOCUMENT_VERSION) => {}
            Some(found) => return Err(Error::Version { found, expected: DOCUMENT_VERSION }),
            None => return Err(doc_err("/version", "expected an unsigned integer")),
        },
        None if value.is_object() => return Err(doc_err("/version", "missing field")),
        None => return Err(doc_err("/", "expected a JSON object")),
    }
    serde_path_to_error::deserialize(value).map_err(|e| doc_err(pointer_of(e.path()), e.inner().to_string()))
}

/// Parses an automaton document.
pub fn automaton_from_json(text: &str) -> Result<Automaton> {
    let doc: AutomatonDoc = decode(text)?;
    let n = doc.states;
    let check = |id: u32, pointer: String| {
        if (id as usize) < n {
            Ok(StateId(id))
        } else {
            Err(doc_err(pointer, format!("state {id} out of range for {n} states")))
        }
    };
    let mut b = AutomatonBuilder::with_states(n);
    for (i, s) in doc.starts.iter().enumerate() {
        b.start(check(s.id, format!("/starts/{i}/id"))?, s.kind);
    }
    for (i, acc) in doc.accepts.iter().enumerate() {
        match *acc {
            AcceptDoc::Id(id) => {
                b.accept(check(id, format!("/accepts/{i}"))?);
            }
            AcceptDoc::Attributed { id, pattern_id } => {
                b.accept_with(check(id, format!("/accepts/{i}/id"))?, pattern_id);
            }
        }
    }
    for (i, e) in doc.edges.iter().enumerate() {
        let class = SymbolClass::parse(&e.class).map_err(|err| doc_err(format!("/edges/{i}/class"), err.to_string()))?;
        b.edge(check(e.src, format!("/edges/{i}/src"))?, class, check(e.dst, format!("/edges/{i}/dst"))?);
    }
    for (i, e) in doc.epsilon.iter().enumerate() {
        b.epsilon(check(e.src, format!("/epsilon/{i}/src"))?, check(e.dst, format!("/epsilon/{i}/dst"))?);
    }
    if let Some(labels) = &doc.component_labels {
        if labels.len() != n {
            return Err(doc_err("/component_labels", format!("expected {n} labels, found {}", labels.len())));
        }
    }
    b.deterministic(doc.deterministic).component_labels(doc.component_labels);
    b.build().validated()
}

/// Serializes an automaton document (pretty-printed, trailing newline).
pub fn automaton_to_json(a: &Automaton) -> String {
    let doc = AutomatonDoc {
        version: DOCUMENT_VERSION,
        states: a.state_count(),
        starts: a.starts().iter().map(|(&s, &kind)| StartDoc { id: s.0, kind }).collect(),
        accepts: a
            .accepts()
            .iter()
            .map(|(&s, &p)| match p {
                None => AcceptDoc::Id(s.0),
                Some(_) => AcceptDoc::Attributed { id: s.0, pattern_id: p },
            })
            .collect(),
        edges: a
            .edges()
            .iter()
            .map(|e| EdgeDoc { src: e.src.0, dst: e.dst.0, class: e.class.to_string() })
            .collect(),
        epsilon: a.epsilon_edges().iter().map(|&(s, d)| EpsilonDoc { src: s.0, dst: d.0 }).collect(),
        deterministic: a.is_deterministic(),
        component_labels: a.component_labels().map(<[u32]>::to_vec),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
    s.push('\n');
    s
}

pub fn patterns_from_json(text: &str) -> Result<PatternSetDocument> {
    let doc: PatternSetDocument = decode(text)?;
    let mut ids = BTreeSet::new();
    for (i, p) in doc.patterns.iter().enumerate() {
        if !ids.insert(p.id) {
            return Err(doc_err(format!("/patterns/{i}/id"), format!("duplicate pattern id {}", p.id)));
        }
    }
    Ok(doc)
}

pub fn patterns_to_json(doc: &PatternSetDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn load_automaton(path: &Path) -> Result<Automaton> {
    automaton_from_json(&read_text(path)?)
}

pub fn save_automaton(a: &Automaton, path: &Path) -> Result<()> {
    write_atomic(path, automaton_to_json(a).as_bytes())
}

pub fn load_patterns(path: &Path) -> Result<PatternSetDocument> {
    patterns_from_json(&read_text(path)?)
}

pub fn save_patterns(doc: &PatternSetDocument, path: &Path) -> Result<()> {
    write_atomic(path, patterns_to_json(doc).as_bytes())
}

/// Writes `bytes` to a temporary file next to `path`, then renames it into
/// place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::io(path, std::io::Error::new(std::io::ErrorKind::InvalidInput, "not a file path")))?;
    let tmp = path.with_file_name(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::compile_regex;

    #[test]
    fn round_trip() {
        let mut b = compile_regex("a[b-d]*|\\x00", StartKind::AllInput).unwrap().to_builder();
        b.accept_with(StateId(1), Some(7));
        let a = b.build();
        let text = automaton_to_json(&a);
        let back = automaton_from_json(&text).unwrap();
        assert_eq!(back, a);
        assert_eq!(automaton_to_json(&back), text);
    }

    #[test]
    fn accepts_both_forms_and_hex() {
        let text = r#"{"version":1,"states":2,
            "starts":[{"id":0,"kind":"start_of_data"}],
            "accepts":[1,{"id":0,"pattern_id":3}],
            "edges":[{"src":0,"dst":1,"class":"0000000000000000000000000000000000000000000000000000000000000002"}]}"#;
        let a = automaton_from_json(text).unwrap();
        assert_eq!(a.edges()[0].class, SymbolClass::byte(1));
        assert_eq!(a.accept_pattern(StateId(0)), Some(3));
        assert_eq!(a.accept_pattern(StateId(1)), None);
    }

    fn message(text: &str) -> String {
        automaton_from_json(text).unwrap_err().to_string()
    }

    const HEAD: &str = r#""version":1,"states":2,"starts":[{"id":0,"kind":"start_of_data"}],"accepts":[1]"#;

    #[test]
    fn empty_class_rejected() {
        let m = message(&format!(r#"{{{HEAD},"edges":[{{"src":0,"dst":1,"class":""}}]}}"#));
        assert!(m.contains("/edges/0/class") && m.contains("empty symbol class"), "{m}");
    }

    #[test]
    fn short_hex_rejected() {
        let m = message(&format!(r#"{{{HEAD},"edges":[{{"src":0,"dst":1,"class":"{}"}}]}}"#, "0".repeat(63)));
        assert!(m.contains("class literal length"), "{m}");
    }

    #[test]
    fn unknown_field_has_pointer() {
        let m = message(&format!(r#"{{{HEAD},"edges":[{{"src":0,"dst":1,"class":"a","weight":2}}]}}"#));
        assert!(m.contains("/edges/0") && m.contains("weight"), "{m}");
        let m = message(&format!(r#"{{{HEAD},"edges":[],"extra":1}}"#));
        assert!(m.contains("extra"), "{m}");
    }

    #[test]
    fn range_and_version_errors() {
        let m = message(&format!(r#"{{{HEAD},"edges":[{{"src":0,"dst":5,"class":"a"}}]}}"#));
        assert!(m.contains("/edges/0/dst"), "{m}");
        let m = message(r#"{"version":2,"states":1,"starts":[],"accepts":[],"edges":[]}"#);
        assert!(m.contains("version 2"), "{m}");
        let m = message(r#"{"version":1,"states":"x","starts":[],"accepts":[],"edges":[]}"#);
        assert!(m.contains("/states"), "{m}");
    }

    #[test]
    fn invalid_automaton_rejected() {
        let m = message(r#"{"version":1,"states":1,"starts":[],"accepts":[],"edges":[]}"#);
        assert!(m.contains("no start state"), "{m}");
    }

    #[test]
    fn pattern_sets() {
        let doc = PatternSetDocument::new(
            StartKind::AllInput,
            Some(42),
            vec![Pattern::regex(0, "ab"), Pattern::regex(1, "c.*d")],
        );
        let text = patterns_to_json(&doc);
        assert_eq!(patterns_from_json(&text).unwrap(), doc);
        let dup = text.replace("\"id\": 1", "\"id\": 0");
        let m = patterns_from_json(&dup).unwrap_err().to_string();
        assert!(m.contains("/patterns/1/id"), "{m}");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
