//! Pattern recipes and automaton generators.
//!
//! All randomness comes from [`SplitMix64`], so every generator is fully
//! determined by its seed on every platform. Symbols are drawn from a fixed
//! alphabet ordering (see [`alphabet_symbol`]): `a`–`z`, `A`–`Z`, `0`–`9`,
//! then the remaining byte values in ascending order.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::automaton::{Automaton, AutomatonBuilder, StartKind, StateId};
use crate::error::{Error, Result};
use crate::regex::{compile_regex, escape_literal, parse};
use crate::symbol::SymbolClass;

/// The splitmix64 generator (Steele, Lea and Flood), 64-bit state.
///
/// `next_u64` adds `0x9E3779B97F4A7C15` to the state and returns the
/// finalized value. `below(n)` rejects draws under `2^64 mod n` and then
/// reduces modulo `n`, so it is unbiased.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound`. `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let r = self.next_u64();
            if r >= threshold {
                return r % bound;
            }
        }
    }

    /// `k` distinct values from `0..n`, ascending (Floyd's sampling).
    pub fn sample_distinct(&mut self, n: u64, k: u64) -> Vec<u64> {
        assert!(k <= n);
        let mut chosen = BTreeSet::new();
        for j in (n - k)..n {
            let t = self.below(j + 1);
            if !chosen.insert(t) {
                chosen.insert(j);
            }
        }
        chosen.into_iter().collect()
    }
}

/// The `i`-th symbol of the generator alphabet ordering.
pub fn alphabet_symbol(i: usize) -> u8 {
    const HEAD: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    if let Some(&b) = HEAD.get(i) {
        return b;
    }
    (0..=255u8)
        .filter(|b| !HEAD.contains(b))
        .nth(i - HEAD.len())
        .expect("alphabet index below 256")
}

/// The DNA alphabet used by the mesh benchmarks.
pub const DNA: &[u8] = b"ACGT";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomRecipe {
    /// State count.
    pub states: usize,
    /// Per-symbol ratio of transitions to states.
    pub density: f64,
    /// Fraction of accepting states.
    pub accept_density: f64,
    pub alphabet_size: usize,
    pub seed: u64,
}

impl RandomRecipe {
    fn check(&self) -> Result<()> {
        if self.states == 0 {
            return Err(Error::InvalidArgument("random automaton needs at least one state".into()));
        }
        if !self.density.is_finite() || self.density <= 0.0 {
            return Err(Error::InvalidArgument(format!("density must be positive, got {}", self.density)));
        }
        if !(0.0..=1.0).contains(&self.accept_density) {
            return Err(Error::InvalidArgument(format!(
                "acceptance density must lie in [0, 1], got {}",
                self.accept_density
            )));
        }
        if self.alphabet_size == 0 || self.alphabet_size > 256 {
            return Err(Error::InvalidArgument(format!(
                "alphabet size must lie in 1..=256, got {}",
                self.alphabet_size
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PatternSource {
    Regex { text: String },
    DotStar { prefix: String, suffix: String },
    Hamming { pattern: String, distance: u32 },
    Levenshtein { pattern: String, distance: u32 },
    Random(RandomRecipe),
}

/// One rule of a pattern set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pattern {
    pub id: u32,
    pub source: PatternSource,
}

impl Pattern {
    pub fn regex(id: u32, text: impl Into<String>) -> Self {
        Pattern { id, source: PatternSource::Regex { text: text.into() } }
    }

    /// Builds the pattern's NFA with every start set to `start`; accepting
    /// states are attributed to the pattern id.
    pub fn compile(&self, start: StartKind) -> Result<Automaton> {
        let a = match &self.source {
            PatternSource::Regex { text } => compile_regex(text, start)?,
            PatternSource::DotStar { prefix, suffix } => compile_regex(&dotstar_regex(prefix, suffix), start)?,
            PatternSource::Hamming { pattern, distance } => gen_hamming(pattern.as_bytes(), *distance)?,
            PatternSource::Levenshtein { pattern, distance } => gen_levenshtein(pattern.as_bytes(), *distance)?,
            PatternSource::Random(recipe) => gen_random_automaton(recipe)?,
        };
        let mut b = a.to_builder();
        for &s in a.starts().keys() {
            b.start(s, start);
        }
        for &s in a.accepts().keys() {
            b.accept_with(s, Some(self.id));
        }
        Ok(b.build())
    }

    /// Size of the pattern along the growth axis: alphabetic width for
    /// regexes, pattern length for meshes, prefix plus suffix for dot-star,
    /// state count for random automata.
    pub fn size(&self) -> Result<f64> {
        Ok(match &self.source {
            PatternSource::Regex { text } => parse(text)?.alphabetic_width() as f64,
            PatternSource::DotStar { prefix, suffix } => (prefix.len() + suffix.len()) as f64,
            PatternSource::Hamming { pattern, .. } | PatternSource::Levenshtein { pattern, .. } => {
                pattern.len() as f64
            }
            PatternSource::Random(r) => r.states as f64,
        })
    }
}

fn dotstar_regex(prefix: &str, suffix: &str) -> String {
    format!("{}.*{}", escape_literal(prefix.as_bytes()), escape_literal(suffix.as_bytes()))
}

fn random_word(rng: &mut SplitMix64, len: usize, alphabet: usize) -> String {
    (0..len)
        .map(|_| alphabet_symbol(rng.below(alphabet as u64) as usize) as char)
        .collect()
}

/// `k` dot-star rules `P.*S` with ids `0..k`. Rules are distinct whenever
/// the alphabet admits `k` distinct prefix/suffix pairs.
pub fn gen_dotstar(
    k: usize,
    prefix_len: usize,
    suffix_len: usize,
    alphabet_size: usize,
    seed: u64,
) -> Result<Vec<Pattern>> {
    if prefix_len == 0 || suffix_len == 0 {
        return Err(Error::InvalidArgument("dot-star prefix and suffix lengths must be at least 1".into()));
    }
    if alphabet_size == 0 || alphabet_size > 62 {
        return Err(Error::InvalidArgument(format!(
            "dot-star alphabet size must lie in 1..=62, got {alphabet_size}"
        )));
    }
    let capacity = (alphabet_size as f64).powi((prefix_len + suffix_len) as i32);
    let mut rng = SplitMix64::new(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let prefix = random_word(&mut rng, prefix_len, alphabet_size);
        let suffix = random_word(&mut rng, suffix_len, alphabet_size);
        if !seen.insert((prefix.clone(), suffix.clone())) && (seen.len() as f64) < capacity {
            continue;
        }
        out.push(Pattern { id: out.len() as u32, source: PatternSource::DotStar { prefix, suffix } });
    }
    Ok(out)
}

fn check_mesh(pattern: &[u8], d: u32) -> Result<()> {
    if pattern.is_empty() {
        return Err(Error::InvalidArgument("mesh pattern must be non-empty".into()));
    }
    if d as usize > pattern.len() {
        return Err(Error::InvalidArgument(format!(
            "distance {d} exceeds pattern length {}",
            pattern.len()
        )));
    }
    Ok(())
}

/// Hamming mesh: accepts strings of length `|pattern|` with at most `d`
/// substitutions. State `(i, e)` means `i` bytes read with `e` mismatches;
/// states with `e > i` are unreachable and omitted. Epsilon-free, acyclic.
pub fn gen_hamming(pattern: &[u8], d: u32) -> Result<Automaton> {
    check_mesh(pattern, d)?;
    let len = pattern.len();
    let d = d as usize;
    let mut ids = vec![vec![None; d + 1]; len + 1];
    let mut b = AutomatonBuilder::new();
    for (i, row) in ids.iter_mut().enumerate() {
        for slot in row.iter_mut().take(i.min(d) + 1) {
            *slot = Some(b.add_state());
        }
    }
    for i in 0..len {
        let hit = SymbolClass::byte(pattern[i]);
        for e in 0..=i.min(d) {
            let src = ids[i][e].unwrap();
            b.edge(src, hit, ids[i + 1][e].unwrap());
            if e < d {
                b.edge(src, hit.complement(), ids[i + 1][e + 1].unwrap());
            }
        }
    }
    b.start(ids[0][0].unwrap(), StartKind::StartOfData);
    for s in ids[len].iter().flatten() {
        b.accept(*s);
    }
    Ok(b.build())
}

/// Levenshtein mesh: accepts strings within edit distance `d` of `pattern`.
/// State `(i, e)` means `i` pattern bytes consumed with `e` edits; the mesh
/// has `(|pattern| + 1) * (d + 1)` states. Insertions and substitutions
/// consume any byte, deletions are epsilon edges; every edge that adds an
/// edit moves down one row, so there are no epsilon cycles.
pub fn gen_levenshtein(pattern: &[u8], d: u32) -> Result<Automaton> {
    check_mesh(pattern, d)?;
    let len = pattern.len();
    let d = d as usize;
    let id = |i: usize, e: usize| StateId::new(e * (len + 1) + i);
    let mut b = AutomatonBuilder::with_states((len + 1) * (d + 1));
    for e in 0..=d {
        for i in 0..=len {
            if let Some(&c) = pattern.get(i) {
                b.edge(id(i, e), SymbolClass::byte(c), id(i + 1, e));
            }
            if e < d {
                b.edge(id(i, e), SymbolClass::full(), id(i, e + 1));
                if i < len {
                    b.edge(id(i, e), SymbolClass::full(), id(i + 1, e + 1));
                    b.epsilon(id(i, e), id(i + 1, e + 1));
                }
            }
        }
        b.accept(id(len, e));
    }
    b.start(id(0, 0), StartKind::StartOfData);
    Ok(b.build())
}

/// Random automaton in the transition-density model.
///
/// For each of the `alphabet_size` symbols, `round(density * states)`
/// distinct `(src, dst)` pairs receive an edge on that symbol;
/// `round(accept_density * states)` distinct states accept; state 0 is the
/// StartOfData start. Unreachable states are kept.
pub fn gen_random_automaton(recipe: &RandomRecipe) -> Result<Automaton> {
    recipe.check()?;
    let n = recipe.states as u64;
    let per_symbol = (recipe.density * n as f64).round() as u64;
    if per_symbol > n * n {
        return Err(Error::InvalidArgument(format!(
            "{per_symbol} transitions per symbol exceed the {} available state pairs",
            n * n
        )));
    }
    let accepting = (recipe.accept_density * n as f64).round() as u64;
    let mut rng = SplitMix64::new(recipe.seed);
    let mut b = AutomatonBuilder::with_states(recipe.states);
    for sym in 0..recipe.alphabet_size {
        let class = SymbolClass::byte(alphabet_symbol(sym));
        for pair in rng.sample_distinct(n * n, per_symbol) {
            b.edge(StateId::new((pair / n) as usize), class, StateId::new((pair % n) as usize));
        }
    }
    for s in rng.sample_distinct(n, accepting) {
        b.accept(StateId::new(s as usize));
    }
    b.start(StateId(0), StartKind::StartOfData);
    Ok(b.build())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshKind {
    Hamming,
    Levenshtein,
}

/// `count` mesh rules with seeded random DNA patterns. Lengths are uniform
/// in `min_len..=max_len`; distances are drawn from `distances` and clipped
/// to the pattern length.
pub fn gen_mesh_patterns(
    kind: MeshKind,
    count: usize,
    min_len: usize,
    max_len: usize,
    distances: &[u32],
    seed: u64,
) -> Result<Vec<Pattern>> {
    if min_len == 0 || max_len < min_len || distances.is_empty() {
        return Err(Error::InvalidArgument("invalid mesh pattern ranges".into()));
    }
    let mut rng = SplitMix64::new(seed);
    Ok((0..count)
        .map(|i| {
            let len = min_len + rng.below((max_len - min_len + 1) as u64) as usize;
            let distance = distances[rng.below(distances.len() as u64) as usize].min(len as u32);
            let pattern: String = (0..len).map(|_| DNA[rng.below(4) as usize] as char).collect();
            let source = match kind {
                MeshKind::Hamming => PatternSource::Hamming { pattern, distance },
                MeshKind::Levenshtein => PatternSource::Levenshtein { pattern, distance },
            };
            Pattern { id: i as u32, source }
        })
        .collect())
}

/// A random regex of nesting depth at most `depth` over the first
/// `alphabet_size` symbols. Uses literals, two-symbol classes, `.`,
/// concatenation, alternation, `*`, `+`, `?` and small counted repetitions.
pub fn gen_random_regex(rng: &mut SplitMix64, depth: u32, alphabet_size: usize) -> String {
    let sym = |rng: &mut SplitMix64| {
        escape_literal(&[alphabet_symbol(rng.below(alphabet_size as u64) as usize)])
    };
    if depth == 0 || rng.below(4) == 0 {
        return match rng.below(10) {
            0 => ".".to_string(),
            1 => format!("[{}{}]", sym(rng), sym(rng)),
            _ => sym(rng),
        };
    }
    let child = |rng: &mut SplitMix64| gen_random_regex(rng, depth - 1, alphabet_size);
    match rng.below(7) {
        0 | 1 => {
            let parts = 2 + rng.below(2);
            (0..parts).map(|_| child(rng)).collect()
        }
        2 => format!("({}|{})", child(rng), child(rng)),
        3 => format!("({})*", child(rng)),
        4 => format!("({})+", child(rng)),
        5 => format!("({})?", child(rng)),
        _ => {
            let lo = rng.below(3);
            let hi = lo + rng.below(2);
            format!("({}){{{lo},{hi}}}", child(rng))
        }
    }
}

/// `count` random regex rules with ids `0..count`.
pub fn gen_random_regexes(count: usize, depth: u32, alphabet_size: usize, seed: u64) -> Vec<Pattern> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|i| Pattern::regex(i as u32, gen_random_regex(&mut rng, depth, alphabet_size)))
        .collect()
}
