//! Regex subset parser and Thompson-style NFA construction.
//!
//! Supported syntax: literals, escapes (`\n`, `\xHH`, `\.`, ...), the
//! shorthands `\d \w \s` and their negations, `.` (any byte), bracket
//! classes `[...]` / `[^...]`, concatenation, `|`, `*`, `+`, `?`, counted
//! repetition `{n}`, `{n,}`, `{n,m}`, and grouping `(...)`.
//!
//! Matching is anchored: the compiled automaton accepts exactly the strings
//! of the regex's language, starting from its start state. Counted
//! repetition is expanded by duplication, with bounds capped at
//! [`MAX_REPEAT`].

use crate::automaton::{Automaton, AutomatonBuilder, StartKind, StateId};
use crate::error::{Error, Result};
use crate::symbol::{parse_bracket, parse_escape_byte, shorthand_class, SymbolClass};

pub const MAX_REPEAT: u32 = 4096;

/// Upper bound on the number of NFA states a single compile may create.
pub const MAX_COMPILED_STATES: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ast {
    Empty,
    Class(SymbolClass),
    Concat(Vec<Ast>),
    Alt(Vec<Ast>),
    Repeat { inner: Box<Ast>, min: u32, max: Option<u32> },
}

impl Ast {
    /// Number of symbol-class occurrences once counted repetition is
    /// expanded the way the compiler expands it (the alphabetic width of the
    /// expression). Unbounded repetition counts its body `min + 1` times.
    pub fn alphabetic_width(&self) -> u64 {
        match self {
            Ast::Empty => 0,
            Ast::Class(_) => 1,
            Ast::Concat(xs) | Ast::Alt(xs) => xs.iter().map(Ast::alphabetic_width).sum(),
            Ast::Repeat { inner, min, max } => {
                let copies = max.unwrap_or(min + 1) as u64;
                inner.alphabetic_width().saturating_mul(copies)
            }
        }
    }
}

pub fn parse(text: &str) -> Result<Ast> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let ast = p.alternation()?;
    if p.pos < p.src.len() {
        return Err(p.error(match p.src[p.pos] {
            b')' => "unbalanced ')'",
            _ => "unexpected character",
        }));
    }
    Ok(ast)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { position: self.pos, message: msg.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn alternation(&mut self) -> Result<Ast> {
        let mut branches = vec![self.concatenation()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            branches.push(self.concatenation()?);
        }
        Ok(if branches.len() == 1 { branches.pop().unwrap() } else { Ast::Alt(branches) })
    }

    fn concatenation(&mut self) -> Result<Ast> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == b'|' || c == b')' {
                break;
            }
            let atom = self.atom()?;
            items.push(self.repetitions(atom)?);
        }
        Ok(match items.len() {
            0 => Ast::Empty,
            1 => items.pop().unwrap(),
            _ => Ast::Concat(items),
        })
    }

    fn atom(&mut self) -> Result<Ast> {
        let start = self.pos;
        match self.src[self.pos] {
            b'(' => {
                self.pos += 1;
                let inner = self.alternation()?;
                if self.peek() != Some(b')') {
                    self.pos = start;
                    return Err(self.error("unclosed group"));
                }
                self.pos += 1;
                Ok(inner)
            }
            b'[' => {
                let (class, end) = parse_bracket(self.src, self.pos)
                    .map_err(|(position, message)| Error::Parse { position, message })?;
                if class.is_empty() {
                    return Err(self.error("character class matches nothing"));
                }
                self.pos = end;
                Ok(Ast::Class(class))
            }
            b'.' => {
                self.pos += 1;
                Ok(Ast::Class(SymbolClass::full()))
            }
            b'\\' => {
                if let Some(class) = self.src.get(self.pos + 1).and_then(|&c| shorthand_class(c)) {
                    self.pos += 2;
                    return Ok(Ast::Class(class));
                }
                let (b, end) = parse_escape_byte(self.src, self.pos)
                    .map_err(|(position, message)| Error::Parse { position, message })?;
                self.pos = end;
                Ok(Ast::Class(SymbolClass::byte(b)))
            }
            b'*' | b'+' | b'?' | b'{' => Err(self.error("repetition operator with nothing to repeat")),
            c => {
                self.pos += 1;
                Ok(Ast::Class(SymbolClass::byte(c)))
            }
        }
    }

    fn repetitions(&mut self, mut atom: Ast) -> Result<Ast> {
        loop {
            let (min, max) = match self.peek() {
                Some(b'*') => (0, None),
                Some(b'+') => (1, None),
                Some(b'?') => (0, Some(1)),
                Some(b'{') => {
                    let start = self.pos;
                    let (min, max) = self.counted()?;
                    if max.is_some_and(|m| m < min) {
                        self.pos = start;
                        return Err(self.error("repetition upper bound below lower bound"));
                    }
                    atom = Ast::Repeat { inner: Box::new(atom), min, max };
                    continue;
                }
                _ => return Ok(atom),
            };
            self.pos += 1;
            atom = Ast::Repeat { inner: Box::new(atom), min, max };
        }
    }

    // `{n}`, `{n,}` or `{n,m}` at the current position.
    fn counted(&mut self) -> Result<(u32, Option<u32>)> {
        self.pos += 1;
        let min = self.number()?;
        let max = match self.peek() {
            Some(b'}') => Some(min),
            Some(b',') => {
                self.pos += 1;
                if self.peek() == Some(b'}') {
                    None
                } else {
                    Some(self.number()?)
                }
            }
            _ => return Err(self.error("malformed counted repetition")),
        };
        if self.peek() != Some(b'}') {
            return Err(self.error("malformed counted repetition"));
        }
        self.pos += 1;
        Ok((min, max))
    }

    fn number(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a repetition count"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<u32>() {
            Ok(n) if n <= MAX_REPEAT => Ok(n),
            _ => {
                self.pos = start;
                Err(self.error(&format!("repetition count exceeds bound of {MAX_REPEAT}")))
            }
        }
    }
}

/// Thompson fragment: one entry and one exit state.
#[derive(Clone, Copy)]
struct Frag {
    entry: StateId,
    exit: StateId,
}

struct Thompson {
    b: AutomatonBuilder,
}

impl Thompson {
    fn state(&mut self) -> Result<StateId> {
        if self.b.state_count() >= MAX_COMPILED_STATES {
            return Err(Error::TooLarge(format!(
                "expansion exceeds {MAX_COMPILED_STATES} NFA states"
            )));
        }
        Ok(self.b.add_state())
    }

    fn compile(&mut self, ast: &Ast) -> Result<Frag> {
        match ast {
            Ast::Empty => {
                let s = self.state()?;
                Ok(Frag { entry: s, exit: s })
            }
            Ast::Class(c) => {
                let entry = self.state()?;
                let exit = self.state()?;
                self.b.edge(entry, *c, exit);
                Ok(Frag { entry, exit })
            }
            Ast::Concat(items) => {
                let (head, rest) = items.split_first().expect("concat is never empty");
                let first = self.compile(head)?;
                let mut exit = first.exit;
                for item in rest {
                    let f = self.compile(item)?;
                    self.b.epsilon(exit, f.entry);
                    exit = f.exit;
                }
                Ok(Frag { entry: first.entry, exit })
            }
            Ast::Alt(branches) => {
                let entry = self.state()?;
                let exit = self.state()?;
                for br in branches {
                    let f = self.compile(br)?;
                    self.b.epsilon(entry, f.entry).epsilon(f.exit, exit);
                }
                Ok(Frag { entry, exit })
            }
            Ast::Repeat { inner, min, max } => self.repeat(inner, *min, *max),
        }
    }

    fn repeat(&mut self, inner: &Ast, min: u32, max: Option<u32>) -> Result<Frag> {
        let entry = self.state()?;
        let mut exit = entry;
        for _ in 0..min {
            let f = self.compile(inner)?;
            self.b.epsilon(exit, f.entry);
            exit = f.exit;
        }
        match max {
            None => {
                // Kleene star on one more copy
                let f = self.compile(inner)?;
                let out = self.state()?;
                self.b
                    .epsilon(exit, f.entry)
                    .epsilon(f.exit, f.entry)
                    .epsilon(f.exit, out)
                    .epsilon(exit, out);
                exit = out;
            }
            Some(max) => {
                let out = self.state()?;
                for _ in min..max {
                    let f = self.compile(inner)?;
                    self.b.epsilon(exit, f.entry).epsilon(exit, out);
                    exit = f.exit;
                }
                self.b.epsilon(exit, out);
                exit = out;
            }
        }
        Ok(Frag { entry, exit })
    }
}

// Mirrors the state allocation of `Thompson::compile`.
fn estimated_states(ast: &Ast) -> u64 {
    match ast {
        Ast::Empty => 1,
        Ast::Class(_) => 2,
        Ast::Concat(xs) => xs.iter().map(estimated_states).fold(0, u64::saturating_add),
        Ast::Alt(xs) => xs.iter().map(estimated_states).fold(2, u64::saturating_add),
        Ast::Repeat { inner, min, max } => {
            let copies = max.unwrap_or(min + 1) as u64;
            estimated_states(inner).saturating_mul(copies).saturating_add(2)
        }
    }
}

/// Compile an AST into an epsilon-NFA whose single start has kind `start`.
pub fn compile_ast(ast: &Ast, start: StartKind) -> Result<Automaton> {
    if start == StartKind::None {
        return Err(Error::InvalidArgument("start kind must not be None".into()));
    }
    let estimate = estimated_states(ast);
    if estimate > MAX_COMPILED_STATES as u64 {
        return Err(Error::TooLarge(format!(
            "expansion needs about {estimate} NFA states, limit is {MAX_COMPILED_STATES}"
        )));
    }
    let mut t = Thompson { b: AutomatonBuilder::new() };
    let frag = t.compile(ast)?;
    t.b.start(frag.entry, start).accept(frag.exit);
    Ok(t.b.build())
}

/// Parse and compile `text` into an epsilon-NFA.
pub fn compile_regex(text: &str, start: StartKind) -> Result<Automaton> {
    compile_ast(&parse(text)?, start)
}

/// Escape bytes so they read back as literals.
pub fn escape_literal(bytes: &[u8]) -> String {
    let mut out = String::new();
    for &b in bytes {
        match b {
            b'.' | b'*' | b'+' | b'?' | b'(' | b')' | b'[' | b']' | b'{' | b'}' | b'|' | b'\\'
            | b'^' | b'$' | b'-' => {
                out.push('\\');
                out.push(b as char);
            }
            0x20..=0x7e => out.push(b as char),
            _ => out.push_str(&format!("\\x{b:02x}")),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(s: &str) -> Ast {
        Ast::Class(SymbolClass::from_bytes(s.bytes()))
    }

    #[test]
    fn parses_core_forms() {
        assert_eq!(parse("ab").unwrap(), Ast::Concat(vec![class("a"), class("b")]));
        assert_eq!(parse("a|").unwrap(), Ast::Alt(vec![class("a"), Ast::Empty]));
        assert_eq!(
            parse("a{2,3}").unwrap(),
            Ast::Repeat { inner: Box::new(class("a")), min: 2, max: Some(3) }
        );
        assert_eq!(
            parse("a{2,}").unwrap(),
            Ast::Repeat { inner: Box::new(class("a")), min: 2, max: None }
        );
        assert_eq!(parse("[a-c]").unwrap(), class("abc"));
        assert_eq!(parse("\\.").unwrap(), class("."));
        assert_eq!(parse("\\x41").unwrap(), class("A"));
        assert_eq!(parse(".").unwrap(), Ast::Class(SymbolClass::full()));
        assert_eq!(parse("()").unwrap(), Ast::Empty);
    }

    #[test]
    fn parse_errors_carry_position() {
        let cases = [("ab(c", 2), ("a)", 1), ("*a", 0), ("a{3", 3), ("a{3,1}", 1), ("[abc", 0), ("a\\", 1)];
        for (text, pos) in cases {
            match parse(text) {
                Err(Error::Parse { position, .. }) => assert_eq!(position, pos, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        match parse("a{4097}") {
            Err(Error::Parse { message, .. }) => assert!(message.contains("4096")),
            other => panic!("{other:?}"),
        }
        assert!(parse("a{4096}").is_ok());
    }

    #[test]
    fn nested_expansion_is_guarded() {
        let err = compile_regex("((a{4096}){4096}){4096}", StartKind::StartOfData).unwrap_err();
        assert!(matches!(err, Error::TooLarge(_)), "{err}");
    }

    #[test]
    fn compiled_nfa_is_valid() {
        for text in ["ab", "pq.*rs", "a{3}", "(a|b)*a(a|b){2}", "x?y+z*", "[^a]{0,2}", ""] {
            let a = compile_regex(text, StartKind::StartOfData).unwrap();
            assert!(a.validate().is_empty(), "{text}");
            assert_eq!(a.starts().len(), 1);
            assert_eq!(a.accepts().len(), 1);
        }
    }

    #[test]
    fn alphabetic_width() {
        assert_eq!(parse("(a|b)*a(a|b){3}").unwrap().alphabetic_width(), 2 + 1 + 6);
        assert_eq!(parse("ab").unwrap().alphabetic_width(), 2);
    }

    #[test]
    fn escape_roundtrip() {
        let raw = b"a.b*\x00(z)";
        let ast = parse(&escape_literal(raw)).unwrap();
        let expect = Ast::Concat(raw.iter().map(|&b| Ast::Class(SymbolClass::byte(b))).collect());
        assert_eq!(ast, expect);
    }
}
