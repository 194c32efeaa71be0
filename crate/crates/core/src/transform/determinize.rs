use std::collections::{BTreeMap, HashMap};

use crate::automaton::{Automaton, AutomatonBuilder, StartKind, StateId};
use crate::error::{Error, Result};
use crate::symbol::SymbolClass;
use crate::transform::alphabet::ByteClasses;
use crate::transform::epsilon::{lower_all_input, Closure};

/// Default limit on materialized DFA states (2^20).
pub const DEFAULT_STATE_CAP: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeterminizeOptions {
    /// Abort once more than this many DFA states are materialized.
    pub cap: usize,
}

impl Default for DeterminizeOptions {
    fn default() -> Self {
        DeterminizeOptions { cap: DEFAULT_STATE_CAP }
    }
}

/// A determinized automaton together with the NFA subset behind each DFA
/// state. Subset ids refer to the input after AllInput lowering, which
/// appends one state when the input has AllInput starts.
#[derive(Clone, Debug)]
pub struct Determinized {
    pub dfa: Automaton,
    pub subsets: Vec<Vec<StateId>>,
}

pub fn determinize(a: &Automaton) -> Result<Automaton> {
    determinize_with(a, DeterminizeOptions::default()).map(|d| d.dfa)
}

/// Subset construction over reachable subsets only.
///
/// The empty subset is never materialized, so the result is a partial DFA
/// where a missing transition means rejection. The one exception is an input
/// with no start state at all, which yields a single non-accepting start.
/// States are numbered in breadth-first discovery order.
pub fn determinize_with(a: &Automaton, opts: DeterminizeOptions) -> Result<Determinized> {
    let nfa = lower_all_input(a);
    let classes = ByteClasses::new(nfa.edges().iter().map(|e| &e.class));
    let k_count = classes.len();
    // class ids covered by each edge, parallel to nfa.edges()
    let covers: Vec<Vec<u16>> = nfa.edges().iter().map(|e| classes.covering(&e.class)).collect();
    let edge_base: Vec<usize> = {
        // index of the first edge of each state in nfa.edges()
        let mut base = vec![0usize; nfa.state_count() + 1];
        for e in nfa.edges() {
            base[e.src.index() + 1] += 1;
        }
        for i in 0..nfa.state_count() {
            base[i + 1] += base[i];
        }
        base
    };

    let mut closure = Closure::new(nfa.state_count());
    let mut initial: Vec<StateId> = nfa.starts().keys().copied().collect();
    closure.close(&nfa, &mut initial);

    let mut subsets: Vec<Vec<StateId>> = vec![initial.clone()];
    let mut index: HashMap<Vec<StateId>, u32> = HashMap::new();
    index.insert(initial, 0);
    let mut out_edges: Vec<(u32, SymbolClass, u32)> = Vec::new();
    let mut buckets: Vec<Vec<StateId>> = vec![Vec::new(); k_count];
    let mut by_target: BTreeMap<u32, SymbolClass> = BTreeMap::new();

    let mut cursor = 0usize;
    while cursor < subsets.len() {
        for bucket in buckets.iter_mut() {
            bucket.clear();
        }
        for &s in &subsets[cursor] {
            let range = edge_base[s.index()]..edge_base[s.index() + 1];
            for (e, cover) in nfa.edges()[range.clone()].iter().zip(&covers[range]) {
                for &k in cover {
                    buckets[k as usize].push(e.dst);
                }
            }
        }
        by_target.clear();
        for (k, bucket) in buckets.iter_mut().enumerate() {
            if bucket.is_empty() {
                continue;
            }
            closure.close(&nfa, bucket);
            let id = match index.get(bucket.as_slice()) {
                Some(&id) => id,
                None => {
                    if subsets.len() >= opts.cap {
                        return Err(Error::CapExceeded { what: "determinization", cap: opts.cap });
                    }
                    let id = subsets.len() as u32;
                    index.insert(bucket.clone(), id);
                    subsets.push(bucket.clone());
                    id
                }
            };
            let c = by_target.entry(id).or_default();
            *c = c.union(classes.members(k));
        }
        out_edges.extend(by_target.iter().map(|(&dst, &class)| (cursor as u32, class, dst)));
        cursor += 1;
    }

    let mut b = AutomatonBuilder::with_states(subsets.len());
    for (src, class, dst) in out_edges {
        b.edge(StateId(src), class, StateId(dst));
    }
    b.start(StateId(0), StartKind::StartOfData).deterministic(true);
    for (i, set) in subsets.iter().enumerate() {
        let mut accepting = false;
        let mut pattern: Option<u32> = None;
        for s in set {
            if let Some(&p) = nfa.accepts().get(s) {
                accepting = true;
                pattern = match (pattern, p) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
            }
        }
        if accepting {
            b.accept_with(StateId::new(i), pattern);
        }
    }
    Ok(Determinized { dfa: b.build(), subsets })
}
