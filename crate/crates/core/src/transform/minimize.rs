//! DFA minimization: Brzozowski's double reversal and Hopcroft's partition
//! refinement.
//!
//! Both produce a partial minimal DFA (no dead state) in canonical form, so
//! their outputs can be compared structurally. An empty language minimizes
//! to a single non-accepting start state.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::automaton::{Automaton, AutomatonBuilder, StartKind, StateId};
use crate::error::{Error, Result};
use crate::symbol::SymbolClass;
use crate::transform::alphabet::ByteClasses;
use crate::transform::determinize::{determinize_with, DeterminizeOptions};
use crate::transform::epsilon::reverse;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Minimizer {
    #[default]
    Brzozowski,
    Hopcroft,
}

impl fmt::Display for Minimizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Minimizer::Brzozowski => "brzozowski",
            Minimizer::Hopcroft => "hopcroft",
        })
    }
}

impl FromStr for Minimizer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brzozowski" => Ok(Minimizer::Brzozowski),
            "hopcroft" => Ok(Minimizer::Hopcroft),
            other => Err(Error::InvalidArgument(format!("unknown minimizer {other:?}"))),
        }
    }
}

/// Minimize any automaton. Hopcroft needs a DFA, so nondeterministic input is
/// determinized first.
pub fn minimize(a: &Automaton, minimizer: Minimizer, opts: DeterminizeOptions) -> Result<Automaton> {
    match minimizer {
        Minimizer::Brzozowski => minimize_brzozowski_with(a, opts),
        Minimizer::Hopcroft if a.check_deterministic().is_ok() => minimize_hopcroft(a),
        Minimizer::Hopcroft => minimize_hopcroft(&determinize_with(a, opts)?.dfa),
    }
}

pub fn minimize_brzozowski(a: &Automaton) -> Result<Automaton> {
    minimize_brzozowski_with(a, DeterminizeOptions::default())
}

/// reverse, determinize, reverse, determinize.
pub fn minimize_brzozowski_with(a: &Automaton, opts: DeterminizeOptions) -> Result<Automaton> {
    let first = determinize_with(&reverse(a), opts)?.dfa;
    let second = determinize_with(&reverse(&first), opts)?.dfa;
    Ok(strip_patterns(&second).canonicalize())
}

fn strip_patterns(a: &Automaton) -> Automaton {
    let mut b = a.to_builder();
    for &s in a.accepts().keys() {
        b.accept_with(s, None);
    }
    b.build()
}

/// Block-structured partition of `0..n` supporting mark-and-split.
struct Partition {
    elems: Vec<u32>,
    loc: Vec<u32>,
    block_of: Vec<u32>,
    first: Vec<u32>,
    end: Vec<u32>,
    // elems[first[b]..mid[b]] are the marked members of block b
    mid: Vec<u32>,
    touched: Vec<u32>,
}

impl Partition {
    fn new(n: usize, initial: &[u32]) -> Self {
        let block_count = initial.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut elems: Vec<u32> = (0..n as u32).collect();
        elems.sort_by_key(|&s| initial[s as usize]);
        let mut loc = vec![0u32; n];
        for (i, &s) in elems.iter().enumerate() {
            loc[s as usize] = i as u32;
        }
        let mut first = vec![0u32; block_count];
        let mut end = vec![0u32; block_count];
        for &b in initial {
            end[b as usize] += 1;
        }
        let mut offset = 0u32;
        for b in 0..block_count {
            first[b] = offset;
            offset += end[b];
            end[b] = offset;
        }
        Partition {
            elems,
            loc,
            block_of: initial.to_vec(),
            mid: first.clone(),
            first,
            end,
            touched: Vec::new(),
        }
    }

    fn block_count(&self) -> usize {
        self.first.len()
    }

    fn size(&self, b: usize) -> usize {
        (self.end[b] - self.first[b]) as usize
    }

    fn members(&self, b: usize) -> &[u32] {
        &self.elems[self.first[b] as usize..self.end[b] as usize]
    }

    fn mark(&mut self, s: u32) {
        let b = self.block_of[s as usize] as usize;
        let i = self.loc[s as usize];
        let m = self.mid[b];
        if i < m {
            return;
        }
        let other = self.elems[m as usize];
        self.elems.swap(i as usize, m as usize);
        self.loc[s as usize] = m;
        self.loc[other as usize] = i;
        if m == self.first[b] {
            self.touched.push(b as u32);
        }
        self.mid[b] = m + 1;
    }

    /// Splits every touched block into marked and unmarked parts. Returns
    /// `(old, new)` pairs; the marked part becomes the new block.
    fn split_touched(&mut self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let touched = std::mem::take(&mut self.touched);
        for b in touched {
            let b = b as usize;
            let (first, mid, end) = (self.first[b], self.mid[b], self.end[b]);
            self.mid[b] = first;
            if mid == end {
                continue;
            }
            let nb = self.first.len();
            self.first.push(first);
            self.end.push(mid);
            self.mid.push(first);
            for i in first..mid {
                self.block_of[self.elems[i as usize] as usize] = nb as u32;
            }
            self.first[b] = mid;
            self.mid[b] = mid;
            out.push((b, nb));
        }
        out
    }
}

/// Hopcroft's partition refinement on a (partial) DFA.
///
/// Unreachable states are dropped first; missing transitions go to a
/// virtual dead state whose block is removed from the result.
pub fn minimize_hopcroft(a: &Automaton) -> Result<Automaton> {
    a.check_deterministic().map_err(Error::Nondeterministic)?;
    let a = a.restrict(&a.reachable());
    let start = *a.starts().keys().next().expect("deterministic automaton has a start");
    let n = a.state_count();
    let dead = n as u32;
    let total = n + 1;

    let classes = ByteClasses::new(a.edges().iter().map(|e| &e.class));
    let k_count = classes.len();
    let mut delta = vec![dead; total * k_count];
    for e in a.edges() {
        for k in classes.covering(&e.class) {
            delta[e.src.index() * k_count + k as usize] = e.dst.0;
        }
    }

    // inverse transitions in CSR form, keyed by target * k_count + class
    let mut inv_start = vec![0u32; total * k_count + 1];
    for row in delta.chunks(k_count) {
        for (k, &t) in row.iter().enumerate() {
            inv_start[t as usize * k_count + k + 1] += 1;
        }
    }
    for i in 0..total * k_count {
        inv_start[i + 1] += inv_start[i];
    }
    let mut fill = inv_start.clone();
    let mut inv = vec![0u32; total * k_count];
    for (s, row) in delta.chunks(k_count).enumerate() {
        for (k, &t) in row.iter().enumerate() {
            let slot = &mut fill[t as usize * k_count + k];
            inv[*slot as usize] = s as u32;
            *slot += 1;
        }
    }

    let accepting: Vec<bool> = (0..total).map(|s| s < n && a.is_accept(StateId::new(s))).collect();
    let has_acc = accepting.iter().any(|&x| x);
    let has_rej = accepting.iter().any(|&x| !x);
    let initial: Vec<u32> = accepting
        .iter()
        .map(|&acc| if has_acc && has_rej { acc as u32 } else { 0 })
        .collect();
    let mut p = Partition::new(total, &initial);

    let mut in_work: Vec<bool> = Vec::new();
    let mut work: Vec<(usize, usize)> = Vec::new();
    let push = |b: usize, k: usize, in_work: &mut Vec<bool>, work: &mut Vec<(usize, usize)>| {
        let idx = b * k_count + k;
        if in_work.len() <= idx {
            in_work.resize((b + 1) * k_count, false);
        }
        if !in_work[idx] {
            in_work[idx] = true;
            work.push((b, k));
        }
    };
    if p.block_count() == 2 {
        let smaller = if p.size(0) <= p.size(1) { 0 } else { 1 };
        for k in 0..k_count {
            push(smaller, k, &mut in_work, &mut work);
        }
    }

    let mut splitter: Vec<u32> = Vec::new();
    while let Some((b, k)) = work.pop() {
        in_work[b * k_count + k] = false;
        splitter.clear();
        splitter.extend_from_slice(p.members(b));
        for &t in &splitter {
            let key = t as usize * k_count + k;
            for &s in &inv[inv_start[key] as usize..inv_start[key + 1] as usize] {
                p.mark(s);
            }
        }
        for (old, new) in p.split_touched() {
            for c in 0..k_count {
                let old_pending = in_work.get(old * k_count + c).copied().unwrap_or(false);
                if old_pending || p.size(new) <= p.size(old) {
                    push(new, c, &mut in_work, &mut work);
                } else {
                    push(old, c, &mut in_work, &mut work);
                }
            }
        }
    }

    let dead_block = p.block_of[dead as usize];
    let start_block = p.block_of[start.index()];
    if start_block == dead_block {
        let mut b = AutomatonBuilder::with_states(1);
        b.start(StateId(0), StartKind::StartOfData).deterministic(true);
        return Ok(b.build());
    }
    let mut new_id = vec![u32::MAX; p.block_count()];
    let mut next = 0u32;
    for (blk, id) in new_id.iter_mut().enumerate() {
        if blk as u32 != dead_block {
            *id = next;
            next += 1;
        }
    }
    let mut b = AutomatonBuilder::with_states(next as usize);
    let mut by_target: BTreeMap<u32, SymbolClass> = BTreeMap::new();
    for blk in 0..p.block_count() {
        if blk as u32 == dead_block {
            continue;
        }
        let rep = p.members(blk)[0] as usize;
        let src = StateId(new_id[blk]);
        if accepting[rep] {
            b.accept(src);
        }
        by_target.clear();
        for k in 0..k_count {
            let tb = p.block_of[delta[rep * k_count + k] as usize];
            if tb != dead_block {
                let c = by_target.entry(new_id[tb as usize]).or_default();
                *c = c.union(classes.members(k));
            }
        }
        for (&dst, &class) in &by_target {
            b.edge(src, class, StateId(dst));
        }
    }
    b.start(StateId(new_id[start_block as usize]), StartKind::StartOfData)
        .deterministic(true);
    Ok(b.build().canonicalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::compile_regex;
    use crate::transform::determinize::determinize;

    fn dfa(text: &str) -> Automaton {
        determinize(&compile_regex(text, StartKind::StartOfData).unwrap()).unwrap()
    }

    #[test]
    fn literal_is_a_fixpoint() {
        let d = dfa("ab");
        for m in [minimize_brzozowski(&d).unwrap(), minimize_hopcroft(&d).unwrap()] {
            assert_eq!(m.state_count(), 3);
            assert!(m.isomorphic(&d).unwrap());
        }
    }

    #[test]
    fn duplicate_accepting_states_merge() {
        // 0 -a-> 1 (acc), 0 -b-> 2 (acc); 1 and 2 are equivalent
        let mut b = AutomatonBuilder::with_states(3);
        b.edge(StateId(0), SymbolClass::byte(b'a'), StateId(1))
            .edge(StateId(0), SymbolClass::byte(b'b'), StateId(2))
            .start(StateId(0), StartKind::StartOfData)
            .accept(StateId(1))
            .accept(StateId(2))
            .deterministic(true);
        let d = b.build();
        assert_eq!(minimize_brzozowski(&d).unwrap().state_count(), 2);
        assert_eq!(minimize_hopcroft(&d).unwrap().state_count(), 2);
    }

    #[test]
    fn equivalent_pair_on_a_collapses() {
        // two accepting states that swap on 'a': language a*
        let mut b = AutomatonBuilder::with_states(2);
        b.edge(StateId(0), SymbolClass::byte(b'a'), StateId(1))
            .edge(StateId(1), SymbolClass::byte(b'a'), StateId(0))
            .start(StateId(0), StartKind::StartOfData)
            .accept(StateId(0))
            .accept(StateId(1))
            .deterministic(true);
        let d = b.build();
        assert_eq!(minimize_hopcroft(&d).unwrap().state_count(), 1);
        assert_eq!(minimize_brzozowski(&d).unwrap().state_count(), 1);
    }

    #[test]
    fn last_k_symbols_family() {
        let d = dfa("(a|b)*a(a|b){2}");
        let h = minimize_hopcroft(&d).unwrap();
        let z = minimize_brzozowski(&d).unwrap();
        assert_eq!(h.state_count(), 8);
        assert_eq!(h, z);
    }

    #[test]
    fn hopcroft_rejects_nfa() {
        let nfa = compile_regex("a|ab", StartKind::StartOfData).unwrap();
        assert!(matches!(minimize_hopcroft(&nfa), Err(Error::Nondeterministic(_))));
        // the dispatcher determinizes first
        let m = minimize(&nfa, Minimizer::Hopcroft, DeterminizeOptions::default()).unwrap();
        assert_eq!(m.state_count(), 3);
    }

    #[test]
    fn empty_language() {
        let mut b = AutomatonBuilder::with_states(2);
        b.edge(StateId(0), SymbolClass::byte(b'a'), StateId(1))
            .start(StateId(0), StartKind::StartOfData)
            .deterministic(true);
        let d = b.build();
        let h = minimize_hopcroft(&d).unwrap();
        let z = minimize_brzozowski(&d).unwrap();
        assert_eq!(h.state_count(), 1);
        assert_eq!(h, z);
    }

    #[test]
    fn minimizer_names() {
        assert_eq!("hopcroft".parse::<Minimizer>().unwrap(), Minimizer::Hopcroft);
        assert_eq!(Minimizer::Brzozowski.to_string(), "brzozowski");
        assert!("moore".parse::<Minimizer>().is_err());
    }
}
