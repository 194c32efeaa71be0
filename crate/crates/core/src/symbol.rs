//! Byte-alphabet symbol classes.
//!
//! Every edge of an [`Automaton`](crate::Automaton) is labeled with a
//! [`SymbolClass`]: a 256-bit set with one bit per byte value. The textual
//! form used by the document format mirrors regex character classes
//! (`[a-c]`, `[^\x00]`, `.`), and a 64-hex-digit literal is accepted for
//! exactness.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;

/// A set of byte values.
///
/// Ordering compares the 256-bit integer whose bit `b` is set iff byte `b`
/// is a member (byte 255 is the most significant bit).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SymbolClass {
    words: [u64; 4],
}

impl SymbolClass {
    pub const EMPTY: SymbolClass = SymbolClass { words: [0; 4] };
    pub const FULL: SymbolClass = SymbolClass { words: [u64::MAX; 4] };

    pub fn empty() -> Self {
        Self::EMPTY
    }

    pub fn full() -> Self {
        Self::FULL
    }

    pub fn byte(b: u8) -> Self {
        let mut c = Self::EMPTY;
        c.insert(b);
        c
    }

    /// Inclusive byte range; empty when `lo > hi`.
    pub fn range(lo: u8, hi: u8) -> Self {
        let mut c = Self::EMPTY;
        if lo <= hi {
            for b in lo..=hi {
                c.insert(b);
            }
        }
        c
    }

    pub fn from_bytes(bytes: impl IntoIterator<Item = u8>) -> Self {
        let mut c = Self::EMPTY;
        for b in bytes {
            c.insert(b);
        }
        c
    }

    pub fn insert(&mut self, b: u8) {
        self.words[(b >> 6) as usize] |= 1u64 << (b & 63);
    }

    pub fn remove(&mut self, b: u8) {
        self.words[(b >> 6) as usize] &= !(1u64 << (b & 63));
    }

    #[inline]
    pub fn contains(&self, b: u8) -> bool {
        self.words[(b >> 6) as usize] & (1u64 << (b & 63)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words == [0; 4]
    }

    pub fn is_full(&self) -> bool {
        self.words == [u64::MAX; 4]
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(other.words.iter()) {
            *w |= o;
        }
        SymbolClass { words }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(other.words.iter()) {
            *w &= o;
        }
        SymbolClass { words }
    }

    pub fn complement(&self) -> Self {
        let mut words = self.words;
        for w in words.iter_mut() {
            *w = !*w;
        }
        SymbolClass { words }
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0u16..256).map(|b| b as u8).filter(move |&b| self.contains(b))
    }

    /// Maximal runs of consecutive members as inclusive ranges.
    pub fn ranges(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        let mut run: Option<(u8, u8)> = None;
        for b in self.iter() {
            run = match run {
                Some((lo, hi)) if hi as u16 + 1 == b as u16 => Some((lo, b)),
                Some(r) => {
                    out.push(r);
                    Some((b, b))
                }
                None => Some((b, b)),
            };
        }
        out.extend(run);
        out
    }

    /// 64 hex digits, most significant (byte 255) first.
    pub fn to_hex(&self) -> String {
        self.words
            .iter()
            .rev()
            .map(|w| format!("{w:016x}"))
            .collect()
    }

    pub fn from_hex(s: &str) -> Result<Self, Error> {
        if s.len() != 64 {
            return Err(Error::class(format!(
                "class literal length: expected 64 hex digits, found {}",
                s.len()
            )));
        }
        let mut words = [0u64; 4];
        for (i, chunk) in s.as_bytes().chunks(16).enumerate() {
            let text = std::str::from_utf8(chunk).map_err(|_| Error::class("invalid hex literal"))?;
            words[3 - i] = u64::from_str_radix(text, 16)
                .map_err(|_| Error::class("invalid hex digit in class literal"))?;
        }
        Ok(SymbolClass { words })
    }

    /// Parse the textual class syntax accepted by the document format.
    ///
    /// Accepted forms: `.` (all bytes), `[...]` / `[^...]` bracket classes,
    /// a single literal character or escape, or a 64-hex-digit literal.
    pub fn parse(text: &str) -> Result<Self, Error> {
        if text.is_empty() {
            return Err(Error::class("empty symbol class"));
        }
        if text == "." {
            return Ok(Self::FULL);
        }
        let bytes = text.as_bytes();
        let class = if bytes[0] == b'[' {
            let (class, end) = parse_bracket(bytes, 0).map_err(|(_, m)| Error::class(m))?;
            if end != bytes.len() {
                return Err(Error::class(format!(
                    "trailing characters after class at offset {end}"
                )));
            }
            class
        } else if bytes.len() > 1 && bytes.iter().all(u8::is_ascii_hexdigit) {
            Self::from_hex(text)?
        } else {
            let (b, end) = parse_class_char(bytes, 0).map_err(|(_, m)| Error::class(m))?;
            if end != bytes.len() {
                return Err(Error::class(format!("unrecognized class syntax {text:?}")));
            }
            Self::byte(b)
        };
        if class.is_empty() {
            return Err(Error::class("empty symbol class"));
        }
        Ok(class)
    }
}

impl Ord for SymbolClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words.iter().rev().cmp(other.words.iter().rev())
    }
}

impl PartialOrd for SymbolClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn push_class_byte(out: &mut String, b: u8) {
    match b {
        b'\\' | b']' | b'[' | b'^' | b'-' => {
            out.push('\\');
            out.push(b as char);
        }
        0x21..=0x7e => out.push(b as char),
        _ => out.push_str(&format!("\\x{b:02x}")),
    }
}

fn write_ranges(out: &mut String, ranges: &[(u8, u8)]) {
    for &(lo, hi) in ranges {
        push_class_byte(out, lo);
        if hi > lo {
            if hi > lo + 1 {
                out.push('-');
            }
            push_class_byte(out, hi);
        }
    }
}

/// Canonical textual form: `.` for the full class, otherwise a bracket
/// class, negated when that is shorter.
impl fmt::Display for SymbolClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_full() {
            return f.write_str(".");
        }
        let mut out = String::from("[");
        let ranges = self.ranges();
        let neg = self.complement().ranges();
        if self.len() > 128 && neg.len() <= ranges.len() {
            out.push('^');
            write_ranges(&mut out, &neg);
        } else {
            write_ranges(&mut out, &ranges);
        }
        out.push(']');
        f.write_str(&out)
    }
}

impl fmt::Debug for SymbolClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolClass({self})")
    }
}

// Shared with the regex parser: positions are byte offsets into `src`.

/// Parse one character (literal or escape) inside a class or as a
/// standalone literal. Returns the byte and the offset after it.
pub(crate) fn parse_class_char(src: &[u8], pos: usize) -> Result<(u8, usize), (usize, String)> {
    match src.get(pos) {
        None => Err((pos, "unexpected end of class".into())),
        Some(b'\\') => parse_escape_byte(src, pos),
        Some(&b) => Ok((b, pos + 1)),
    }
}

/// Escape at `src[pos] == '\\'` denoting a single byte.
pub(crate) fn parse_escape_byte(src: &[u8], pos: usize) -> Result<(u8, usize), (usize, String)> {
    let Some(&c) = src.get(pos + 1) else {
        return Err((pos, "dangling escape".into()));
    };
    let b = match c {
        b'n' => b'\n',
        b't' => b'\t',
        b'r' => b'\r',
        b'0' => 0,
        b'f' => 0x0c,
        b'v' => 0x0b,
        b'x' => {
            let hex = src
                .get(pos + 2..pos + 4)
                .ok_or((pos, "truncated \\x escape".to_string()))?;
            let text = std::str::from_utf8(hex).map_err(|_| (pos, "invalid \\x escape".to_string()))?;
            let v = u8::from_str_radix(text, 16).map_err(|_| (pos, "invalid \\x escape".to_string()))?;
            return Ok((v, pos + 4));
        }
        c if c.is_ascii_alphanumeric() => {
            return Err((pos, format!("unknown escape \\{}", c as char)));
        }
        c => c,
    };
    Ok((b, pos + 2))
}

/// Perl-style shorthand classes `\d`, `\w`, `\s` and their negations.
pub(crate) fn shorthand_class(c: u8) -> Option<SymbolClass> {
    let digit = SymbolClass::range(b'0', b'9');
    let word = digit
        .union(&SymbolClass::range(b'a', b'z'))
        .union(&SymbolClass::range(b'A', b'Z'))
        .union(&SymbolClass::byte(b'_'));
    let space = SymbolClass::from_bytes([b' ', b'\t', b'\n', b'\r', 0x0b, 0x0c]);
    match c {
        b'd' => Some(digit),
        b'D' => Some(digit.complement()),
        b'w' => Some(word),
        b'W' => Some(word.complement()),
        b's' => Some(space),
        b'S' => Some(space.complement()),
        _ => None,
    }
}

/// Parse a bracket class starting at `src[pos] == '['`. Returns the class and
/// the offset just past the closing `]`.
pub(crate) fn parse_bracket(src: &[u8], pos: usize) -> Result<(SymbolClass, usize), (usize, String)> {
    debug_assert_eq!(src.get(pos), Some(&b'['));
    let mut i = pos + 1;
    let negated = src.get(i) == Some(&b'^');
    if negated {
        i += 1;
    }
    let mut class = SymbolClass::EMPTY;
    let mut first = true;
    loop {
        match src.get(i) {
            None => return Err((pos, "unterminated character class".into())),
            Some(b']') if !first => {
                i += 1;
                break;
            }
            Some(b'\\') if src.get(i + 1).and_then(|&c| shorthand_class(c)).is_some() => {
                class = class.union(&shorthand_class(src[i + 1]).unwrap());
                i += 2;
            }
            _ => {
                let (lo, next) = parse_class_char(src, i)?;
                if src.get(next) == Some(&b'-') && !matches!(src.get(next + 1), Some(b']') | None) {
                    let (hi, after) = parse_class_char(src, next + 1)?;
                    if hi < lo {
                        return Err((i, format!("reversed class range {lo:#04x}-{hi:#04x}")));
                    }
                    class = class.union(&SymbolClass::range(lo, hi));
                    i = after;
                } else {
                    class.insert(lo);
                    i = next;
                }
            }
        }
        first = false;
    }
    Ok((if negated { class.complement() } else { class }, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_membership() {
        let c = SymbolClass::range(b'a', b'c');
        assert!(c.contains(b'b'));
        assert!(!c.contains(b'd'));
        assert_eq!(c.len(), 3);
        assert_eq!(c.to_string(), "[a-c]");
        assert_eq!(SymbolClass::full().to_string(), ".");
        assert_eq!(SymbolClass::byte(0).to_string(), "[\\x00]");
        assert_eq!(SymbolClass::byte(b'a').complement().to_string(), "[^a]");
        assert_eq!(SymbolClass::from_bytes(*b"ab").to_string(), "[ab]");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(SymbolClass::parse("a").unwrap(), SymbolClass::byte(b'a'));
        assert_eq!(SymbolClass::parse(".").unwrap(), SymbolClass::full());
        assert_eq!(SymbolClass::parse("[^a]").unwrap(), SymbolClass::byte(b'a').complement());
        assert_eq!(SymbolClass::parse("[\\x00-\\x02]").unwrap(), SymbolClass::range(0, 2));
        assert_eq!(SymbolClass::parse("[]a]").unwrap(), SymbolClass::from_bytes(*b"]a"));
        assert_eq!(SymbolClass::parse("[a-]").unwrap(), SymbolClass::from_bytes(*b"-a"));
        let hex = SymbolClass::range(b'a', b'z').to_hex();
        assert_eq!(SymbolClass::parse(&hex).unwrap(), SymbolClass::range(b'a', b'z'));
    }

    #[test]
    fn parse_rejections() {
        let e = SymbolClass::parse("").unwrap_err().to_string();
        assert!(e.contains("empty symbol class"), "{e}");
        let e = SymbolClass::parse(&"f".repeat(63)).unwrap_err().to_string();
        assert!(e.contains("class literal length"), "{e}");
        assert!(SymbolClass::parse(&"0".repeat(64)).unwrap_err().to_string().contains("empty symbol class"));
        assert!(SymbolClass::parse("[z-a]").is_err());
        assert!(SymbolClass::parse("[abc").is_err());
        assert!(SymbolClass::parse("abx").is_err());
    }

    #[test]
    fn ordering_is_integer_order() {
        assert!(SymbolClass::byte(0) < SymbolClass::byte(1));
        assert!(SymbolClass::byte(255) > SymbolClass::range(0, 254));
    }

    fn arb_class() -> impl Strategy<Value = SymbolClass> {
        prop::array::uniform4(any::<u64>())
            .prop_map(|words| SymbolClass { words })
            .prop_filter("non-empty", |c| !c.is_empty())
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(c in arb_class()) {
            prop_assert_eq!(SymbolClass::parse(&c.to_string()).unwrap(), c);
            prop_assert_eq!(SymbolClass::parse(&c.to_hex()).unwrap(), c);
        }

        #[test]
        fn sparse_roundtrip(bytes in prop::collection::vec(any::<u8>(), 1..6)) {
            let c = SymbolClass::from_bytes(bytes);
            prop_assert_eq!(SymbolClass::parse(&c.to_string()).unwrap(), c);
        }
    }
}
