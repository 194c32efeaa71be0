use crate::automaton::{Automaton, AutomatonBuilder, StartKind, StateId};

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Splits an automaton into its weakly connected components.
///
/// Components are ordered by their lowest state index and keep their states'
/// relative order, starts and accepts. Every state of a component is labeled
/// with its rule id: the smallest pattern id among its accepting states, or
/// else its position in the returned list.
pub fn connected_components(a: &Automaton) -> Vec<Automaton> {
    let n = a.state_count();
    let mut parent: Vec<usize> = (0..n).collect();
    let links = a
        .edges()
        .iter()
        .map(|e| (e.src, e.dst))
        .chain(a.epsilon_edges().iter().copied());
    for (s, d) in links {
        let (rs, rd) = (find(&mut parent, s.index()), find(&mut parent, d.index()));
        if rs != rd {
            parent[rs.max(rd)] = rs.min(rd);
        }
    }
    let roots: Vec<usize> = (0..n).map(|s| find(&mut parent, s)).collect();
    let mut order: Vec<usize> = Vec::new();
    for (s, &r) in roots.iter().enumerate() {
        if r == s {
            order.push(s);
        }
    }
    order
        .iter()
        .enumerate()
        .map(|(i, &root)| {
            let keep: Vec<bool> = roots.iter().map(|&r| r == root).collect();
            let part = a.restrict(&keep);
            let rule = part
                .accepts()
                .values()
                .filter_map(|&p| p)
                .min()
                .unwrap_or(i as u32);
            let mut b = part.to_builder();
            b.component_labels(Some(vec![rule; part.state_count()]));
            b.build()
        })
        .collect()
}

/// Disjoint union under a fresh shared StartOfData state (state 0).
///
/// StartOfData starts of each input are reached from the shared start by
/// epsilon edges; AllInput starts stay AllInput. Accepting states record
/// the pattern they came from: their existing pattern id, or else the
/// input's position in `patterns`.
pub fn merge_patterns(patterns: &[Automaton]) -> Automaton {
    let mut b = AutomatonBuilder::new();
    let hub = b.add_state();
    b.start(hub, StartKind::StartOfData);
    for (i, p) in patterns.iter().enumerate() {
        let base = b.add_states(p.state_count()).0;
        let shift = |s: StateId| StateId(s.0 + base);
        for e in p.edges() {
            b.edge(shift(e.src), e.class, shift(e.dst));
        }
        for &(s, d) in p.epsilon_edges() {
            b.epsilon(shift(s), shift(d));
        }
        for (&s, &k) in p.starts() {
            match k {
                StartKind::AllInput => {
                    b.start(shift(s), StartKind::AllInput);
                }
                _ => {
                    b.epsilon(hub, shift(s));
                }
            }
        }
        for &s in p.accepts().keys() {
            b.accept_with(shift(s), Some(p.accept_pattern(s).unwrap_or(i as u32)));
        }
    }
    b.build()
}
