//! Verification oracles: exact language equivalence and a table-filling
//! count of minimal states that shares no code with the minimizers.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};
use crate::transform::alphabet::ByteClasses;
use crate::transform::determinize::{determinize_with, DeterminizeOptions};

pub const BRUTE_FORCE_LIMIT: usize = 512;

pub fn equivalent(a: &Automaton, b: &Automaton) -> Result<bool> {
    equivalent_with(a, b, DeterminizeOptions::default())
}

/// Exact language equivalence: determinize both sides, then search the
/// product for a reachable pair that disagrees on acceptance.
pub fn equivalent_with(a: &Automaton, b: &Automaton, opts: DeterminizeOptions) -> Result<bool> {
    let da = determinize_with(a, opts)?.dfa;
    let db = determinize_with(b, opts)?.dfa;
    let classes = ByteClasses::new(da.edges().iter().chain(db.edges()).map(|e| &e.class));
    let k_count = classes.len();
    let table = |d: &Automaton| {
        let mut t = vec![u32::MAX; d.state_count() * k_count];
        for e in d.edges() {
            for k in classes.covering(&e.class) {
                t[e.src.index() * k_count + k as usize] = e.dst.0;
            }
        }
        t
    };
    let (ta, tb) = (table(&da), table(&db));
    const NONE: u32 = u32::MAX;
    let acc = |d: &Automaton, s: u32| s != NONE && d.is_accept(StateId(s));

    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    let mut queue = VecDeque::from([(0u32, 0u32)]);
    seen.insert((0, 0));
    while let Some((p, q)) = queue.pop_front() {
        if acc(&da, p) != acc(&db, q) {
            return Ok(false);
        }
        for k in 0..k_count {
            let np = if p == NONE { NONE } else { ta[p as usize * k_count + k] };
            let nq = if q == NONE { NONE } else { tb[q as usize * k_count + k] };
            if np == NONE && nq == NONE {
                continue;
            }
            if seen.insert((np, nq)) {
                queue.push_back((np, nq));
            }
        }
    }
    Ok(true)
}

/// Number of Myhill–Nerode classes among the live (reachable and
/// co-reachable) states of a DFA, by iterated pair marking.
///
/// A DFA with no live state (empty language) counts as 1, matching the
/// single start state the minimizers keep. Inputs above
/// [`BRUTE_FORCE_LIMIT`] states are rejected.
pub fn brute_force_minimal_states(a: &Automaton) -> Result<usize> {
    a.check_deterministic().map_err(Error::Nondeterministic)?;
    if a.state_count() > BRUTE_FORCE_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "brute-force oracle accepts at most {BRUTE_FORCE_LIMIT} states, got {}",
            a.state_count()
        )));
    }
    let reach = a.reachable();
    let co = a.coreachable();
    let live: Vec<usize> = (0..a.state_count()).filter(|&s| reach[s] && co[s]).collect();
    if live.is_empty() {
        return Ok(1);
    }
    let m = live.len();
    let dead = m;
    let mut index = vec![dead; a.state_count()];
    for (i, &s) in live.iter().enumerate() {
        index[s] = i;
    }

    // full byte table over live states plus the dead sink
    let mut next = vec![[dead; 256]; m + 1];
    for e in a.edges() {
        let (src, dst) = (index[e.src.index()], index[e.dst.index()]);
        if src == dead {
            continue;
        }
        for byte in e.class.iter() {
            next[src][byte as usize] = dst;
        }
    }
    // one representative byte per distinct column
    let mut columns: HashMap<Vec<usize>, u8> = HashMap::new();
    for byte in 0..=255u8 {
        let col: Vec<usize> = next.iter().map(|row| row[byte as usize]).collect();
        columns.entry(col).or_insert(byte);
    }
    let mut reps: Vec<u8> = columns.into_values().collect();
    reps.sort_unstable();

    let accepting: Vec<bool> = (0..=m).map(|i| i < m && a.is_accept(StateId::new(live[i]))).collect();
    let size = m + 1;
    let mut marked = vec![false; size * size];
    for p in 0..size {
        for q in 0..size {
            marked[p * size + q] = accepting[p] != accepting[q];
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for p in 0..size {
            for q in (p + 1)..size {
                if marked[p * size + q] {
                    continue;
                }
                let split = reps.iter().any(|&c| {
                    let (np, nq) = (next[p][c as usize], next[q][c as usize]);
                    np != nq && marked[np * size + nq]
                });
                if split {
                    marked[p * size + q] = true;
                    marked[q * size + p] = true;
                    changed = true;
                }
            }
        }
    }
    // a live state opens a new class unless an earlier one is equivalent
    Ok((0..m).filter(|&p| (0..p).all(|q| marked[q * size + p])).count())
}
