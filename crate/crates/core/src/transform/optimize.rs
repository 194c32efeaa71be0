use std::collections::{BTreeMap, HashMap};

use crate::automaton::{Automaton, StartKind, StateId};
use crate::symbol::SymbolClass;
use crate::transform::epsilon::remove_epsilon;

#[derive(PartialEq, Eq, Hash)]
struct Signature {
    accept: Option<Option<u32>>,
    start: StartKind,
    label: Option<u32>,
    // per target, every byte leading there
    out: Vec<(StateId, SymbolClass)>,
}

fn signature(a: &Automaton, s: StateId) -> Signature {
    let mut out: BTreeMap<StateId, SymbolClass> = BTreeMap::new();
    for e in a.out_edges(s) {
        let c = out.entry(e.dst).or_default();
        *c = c.union(&e.class);
    }
    Signature {
        accept: a.accepts().get(&s).copied(),
        start: a.start_kind(s),
        label: a.component_label(s),
        out: out.into_iter().collect(),
    }
}

/// Merges states with identical outgoing behavior until nothing changes.
///
/// Two states merge when they agree on acceptance and reported pattern,
/// start kind, component label, and on the set of `(byte, target)` transitions. The survivor of
/// each group is its lowest-numbered state; incoming edges are redirected to
/// it. Epsilon edges are removed first. Never increases the state count and
/// preserves the language.
pub fn optimize_nfa(a: &Automaton) -> Automaton {
    let mut current = remove_epsilon(a);
    loop {
        let n = current.state_count();
        let mut groups: HashMap<Signature, StateId> = HashMap::with_capacity(n);
        let mut rep = Vec::with_capacity(n);
        for s in current.states() {
            rep.push(*groups.entry(signature(&current, s)).or_insert(s));
        }
        if groups.len() == n {
            return current;
        }
        let mut new_id = vec![StateId(u32::MAX); n];
        let mut next = 0usize;
        for s in 0..n {
            if rep[s].index() == s {
                new_id[s] = StateId::new(next);
                next += 1;
            }
        }
        let map: Vec<StateId> = rep.iter().map(|r| new_id[r.index()]).collect();
        current = current.renumber(&map, next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::AutomatonBuilder;

    fn sym(b: u8) -> SymbolClass {
        SymbolClass::byte(b)
    }

    #[test]
    fn identical_successors_merge() {
        // q0 -x-> q1, q0 -y-> q2; q1,q2 both {a->q3, b->q3}
        let mut b = AutomatonBuilder::with_states(4);
        b.edge(StateId(0), sym(b'x'), StateId(1))
            .edge(StateId(0), sym(b'y'), StateId(2))
            .edge(StateId(1), sym(b'a'), StateId(3))
            .edge(StateId(1), sym(b'b'), StateId(3))
            .edge(StateId(2), sym(b'a'), StateId(3))
            .edge(StateId(2), sym(b'b'), StateId(3))
            .start(StateId(0), StartKind::StartOfData)
            .accept(StateId(3));
        let o = optimize_nfa(&b.build());
        assert_eq!(o.state_count(), 3);
        assert_eq!(o.out_edges(StateId(0)).len(), 2);
    }

    #[test]
    fn differently_factored_classes_compare_equal() {
        let mut b = AutomatonBuilder::with_states(4);
        b.edge(StateId(0), sym(b'x'), StateId(1))
            .edge(StateId(0), sym(b'y'), StateId(2))
            .edge(StateId(1), SymbolClass::range(b'a', b'b'), StateId(3))
            .edge(StateId(2), sym(b'a'), StateId(3))
            .edge(StateId(2), sym(b'b'), StateId(3))
            .start(StateId(0), StartKind::StartOfData)
            .accept(StateId(3));
        assert_eq!(optimize_nfa(&b.build()).state_count(), 3);
    }

    #[test]
    fn distinct_signatures_unchanged() {
        let mut b = AutomatonBuilder::with_states(3);
        b.edge(StateId(0), sym(b'a'), StateId(1))
            .edge(StateId(1), sym(b'b'), StateId(2))
            .start(StateId(0), StartKind::StartOfData)
            .accept(StateId(2));
        let a = b.build();
        assert_eq!(optimize_nfa(&a), a);
    }

    #[test]
    fn accepting_sinks_merge() {
        let mut b = AutomatonBuilder::with_states(3);
        b.edge(StateId(0), sym(b'a'), StateId(1))
            .edge(StateId(0), sym(b'b'), StateId(2))
            .start(StateId(0), StartKind::StartOfData)
            .accept(StateId(1))
            .accept(StateId(2));
        assert_eq!(optimize_nfa(&b.build()).state_count(), 2);
    }

    #[test]
    fn accepting_and_rejecting_do_not_merge() {
        let mut b = AutomatonBuilder::with_states(3);
        b.edge(StateId(0), sym(b'a'), StateId(1))
            .edge(StateId(0), sym(b'b'), StateId(2))
            .start(StateId(0), StartKind::StartOfData)
            .accept(StateId(1));
        assert_eq!(optimize_nfa(&b.build()).state_count(), 3);
    }

    #[test]
    fn merging_cascades_to_fixpoint() {
        // two parallel chains x-a-b and y-a-b collapse level by level
        let mut b = AutomatonBuilder::with_states(7);
        b.edge(StateId(0), sym(b'x'), StateId(1))
            .edge(StateId(1), sym(b'a'), StateId(2))
            .edge(StateId(2), sym(b'b'), StateId(3))
            .edge(StateId(0), sym(b'y'), StateId(4))
            .edge(StateId(4), sym(b'a'), StateId(5))
            .edge(StateId(5), sym(b'b'), StateId(6))
            .start(StateId(0), StartKind::StartOfData)
            .accept(StateId(3))
            .accept(StateId(6));
        let o = optimize_nfa(&b.build());
        assert_eq!(o.state_count(), 4);
        assert_eq!(optimize_nfa(&o), o);
    }
}
