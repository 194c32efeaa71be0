#![allow(dead_code)]

use std::collections::BTreeSet;

use statecount::regex::Ast;
use statecount::{Automaton, StartKind, StateId};

/// End positions `j` such that `ast` matches `s[i..j]`, by direct recursion
/// over the syntax tree.
pub fn ends(ast: &Ast, s: &[u8], i: usize) -> BTreeSet<usize> {
    match ast {
        Ast::Empty => BTreeSet::from([i]),
        Ast::Class(c) => {
            if i < s.len() && c.contains(s[i]) {
                BTreeSet::from([i + 1])
            } else {
                BTreeSet::new()
            }
        }
        Ast::Concat(items) => items.iter().fold(BTreeSet::from([i]), |cur, item| {
            cur.iter().flat_map(|&p| ends(item, s, p)).collect()
        }),
        Ast::Alt(branches) => branches.iter().flat_map(|b| ends(b, s, i)).collect(),
        Ast::Repeat { inner, min, max } => {
            let mut out = BTreeSet::new();
            let mut cur = BTreeSet::from([i]);
            let mut k = 0u32;
            loop {
                if k >= *min {
                    out.extend(cur.iter().copied());
                }
                if Some(k) == *max || cur.is_empty() {
                    break;
                }
                let next: BTreeSet<usize> = cur.iter().flat_map(|&p| ends(inner, s, p)).collect();
                if max.is_none() && k >= *min && next.is_subset(&out) {
                    break;
                }
                cur = next;
                k += 1;
            }
            out
        }
    }
}

pub fn reference_match(ast: &Ast, s: &[u8]) -> bool {
    ends(ast, s, 0).contains(&s.len())
}

fn close(a: &Automaton, set: &mut BTreeSet<StateId>) {
    let mut stack: Vec<StateId> = set.iter().copied().collect();
    while let Some(s) = stack.pop() {
        for &(src, dst) in a.epsilon_edges() {
            if src == s && set.insert(dst) {
                stack.push(dst);
            }
        }
    }
}

/// Whole-string membership: AllInput starts may begin a match at any
/// offset, StartOfData starts only at offset 0.
pub fn accepts(a: &Automaton, s: &[u8]) -> bool {
    let starts = |kind: StartKind| -> BTreeSet<StateId> {
        let mut set: BTreeSet<StateId> =
            a.starts().iter().filter(|(_, &k)| k == kind).map(|(&s, _)| s).collect();
        close(a, &mut set);
        set
    };
    let always = starts(StartKind::AllInput);
    let mut cur: BTreeSet<StateId> = starts(StartKind::StartOfData).union(&always).copied().collect();
    for &b in s {
        let mut next: BTreeSet<StateId> = a
            .edges()
            .iter()
            .filter(|e| cur.contains(&e.src) && e.class.contains(b))
            .map(|e| e.dst)
            .collect();
        close(a, &mut next);
        next.extend(always.iter().copied());
        cur = next;
    }
    cur.iter().any(|&s| a.is_accept(s))
}

/// Every string over `alphabet` of length at most `max_len`.
pub fn strings(alphabet: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w: &Vec<u8>| {
                alphabet.iter().map(move |&c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

pub fn edit_distance(a: &[u8], b: &[u8]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for i in 1..=a.len() {
        let mut row = vec![i; b.len() + 1];
        for j in 1..=b.len() {
            let sub = prev[j - 1] + usize::from(a[i - 1] != b[j - 1]);
            row[j] = sub.min(prev[j] + 1).min(row[j - 1] + 1);
        }
        prev = row;
    }
    prev[b.len()]
}

pub fn hamming_within(p: &[u8], s: &[u8], d: usize) -> bool {
    p.len() == s.len() && p.iter().zip(s).filter(|(x, y)| x != y).count() <= d
}
