use crate::automaton::{Automaton, AutomatonBuilder, StartKind, StateId};
use crate::symbol::SymbolClass;

/// Reusable epsilon-closure scratch space.
pub(crate) struct Closure {
    mark: Vec<u32>,
    generation: u32,
    stack: Vec<StateId>,
}

impl Closure {
    pub(crate) fn new(n: usize) -> Self {
        Closure { mark: vec![0; n], generation: 0, stack: Vec::new() }
    }

    /// Extends `set` in place with its epsilon closure, then sorts it.
    pub(crate) fn close(&mut self, a: &Automaton, set: &mut Vec<StateId>) {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.generation = 1;
        }
        let g = self.generation;
        set.retain(|s| {
            let fresh = self.mark[s.index()] != g;
            self.mark[s.index()] = g;
            fresh
        });
        if a.has_epsilon() {
            self.stack.clear();
            self.stack.extend(set.iter().copied());
            while let Some(s) = self.stack.pop() {
                for d in a.out_epsilon(s) {
                    if self.mark[d.index()] != g {
                        self.mark[d.index()] = g;
                        set.push(d);
                        self.stack.push(d);
                    }
                }
            }
        }
        set.sort_unstable();
    }
}

/// Epsilon-free automaton with the same language and the same states.
///
/// A state inherits the labeled edges and acceptance of every state in its
/// epsilon closure; start markings are unchanged.
pub fn remove_epsilon(a: &Automaton) -> Automaton {
    if !a.has_epsilon() {
        return a.clone();
    }
    let mut closure = Closure::new(a.state_count());
    let mut b = AutomatonBuilder::with_states(a.state_count());
    let mut set = Vec::new();
    for q in a.states() {
        set.clear();
        set.push(q);
        closure.close(a, &mut set);
        for &p in &set {
            for e in a.out_edges(p) {
                b.edge(q, e.class, e.dst);
            }
            if let Some(&pattern) = a.accepts().get(&p) {
                b.accept_merge(q, pattern);
            }
        }
    }
    for (&s, &k) in a.starts() {
        b.start(s, k);
    }
    b.component_labels(a.component_labels().map(<[u32]>::to_vec));
    b.build()
}

/// Replaces AllInput start markings by a fresh StartOfData state carrying a
/// full-alphabet self-loop and epsilon edges to each former AllInput start.
/// Automata without AllInput starts are returned unchanged.
pub fn lower_all_input(a: &Automaton) -> Automaton {
    if !a.has_all_input_start() {
        return a.clone();
    }
    let mut b = a.to_builder();
    let hub = b.add_state();
    b.edge(hub, SymbolClass::full(), hub).start(hub, StartKind::StartOfData);
    for (&s, &k) in a.starts() {
        if k == StartKind::AllInput {
            b.start(s, StartKind::None).epsilon(hub, s);
        }
    }
    // the hub links every component, so labels no longer partition states
    b.deterministic(false).component_labels(None);
    b.build()
}

/// Reverses every edge; accepting states become StartOfData starts and start
/// states become accepting. AllInput starts are lowered first.
pub fn reverse(a: &Automaton) -> Automaton {
    let a = lower_all_input(a);
    let mut b = AutomatonBuilder::with_states(a.state_count());
    for e in a.edges() {
        b.edge(e.dst, e.class, e.src);
    }
    for &(s, d) in a.epsilon_edges() {
        b.epsilon(d, s);
    }
    for &s in a.accepts().keys() {
        b.start(s, StartKind::StartOfData);
    }
    for &s in a.starts().keys() {
        b.accept(s);
    }
    b.build()
}
