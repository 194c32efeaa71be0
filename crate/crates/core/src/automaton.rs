//! The automaton value shared by every operation in the crate.
//!
//! An [`Automaton`] is an edge-labeled finite automaton over the byte
//! alphabet. It covers NFAs (epsilon edges, several starts, overlapping
//! classes) and partial DFAs (no dead state) alike; `deterministic` records
//! which of the two a value claims to be, and [`Automaton::validate`] checks
//! the claim.
//!
//! Values are immutable once built. Edges are kept sorted by
//! `(src, class, dst)` with exact duplicates removed, so derived equality is
//! structural equality.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::SymbolClass;

/// Dense state index, unique within one automaton.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(pub u32);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn new(index: usize) -> Self {
        StateId(index as u32)
    }
}

impl fmt::Debug for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How a start state is activated during simulation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartKind {
    #[default]
    None,
    /// Active only before the first input byte (anchored matching).
    StartOfData,
    /// Re-activated on every cycle (unanchored matching).
    AllInput,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Edge {
    pub src: StateId,
    pub class: SymbolClass,
    pub dst: StateId,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Automaton {
    state_count: usize,
    edges: Vec<Edge>,
    epsilon: Vec<(StateId, StateId)>,
    starts: BTreeMap<StateId, StartKind>,
    // accept state -> originating pattern id, when known
    accepts: BTreeMap<StateId, Option<u32>>,
    deterministic: bool,
    component_labels: Option<Vec<u32>>,
    // edges[edge_offsets[s]..edge_offsets[s + 1]] leave state s
    edge_offsets: Vec<usize>,
    eps_offsets: Vec<usize>,
}

/// Incremental constructor for [`Automaton`].
#[derive(Clone, Debug, Default)]
pub struct AutomatonBuilder {
    state_count: usize,
    edges: Vec<Edge>,
    epsilon: Vec<(StateId, StateId)>,
    starts: BTreeMap<StateId, StartKind>,
    accepts: BTreeMap<StateId, Option<u32>>,
    deterministic: bool,
    component_labels: Option<Vec<u32>>,
}

impl AutomatonBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_states(n: usize) -> Self {
        AutomatonBuilder { state_count: n, ..Self::default() }
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn add_state(&mut self) -> StateId {
        self.state_count += 1;
        StateId::new(self.state_count - 1)
    }

    pub fn add_states(&mut self, n: usize) -> StateId {
        let first = StateId::new(self.state_count);
        self.state_count += n;
        first
    }

    pub fn edge(&mut self, src: StateId, class: SymbolClass, dst: StateId) -> &mut Self {
        self.edges.push(Edge { src, class, dst });
        self
    }

    pub fn epsilon(&mut self, src: StateId, dst: StateId) -> &mut Self {
        self.epsilon.push((src, dst));
        self
    }

    /// Marks `s` as a start state; `StartKind::None` clears the marking.
    pub fn start(&mut self, s: StateId, kind: StartKind) -> &mut Self {
        if kind == StartKind::None {
            self.starts.remove(&s);
        } else {
            self.starts.insert(s, kind);
        }
        self
    }

    pub fn accept(&mut self, s: StateId) -> &mut Self {
        self.accepts.entry(s).or_insert(None);
        self
    }

    pub fn accept_with(&mut self, s: StateId, pattern: Option<u32>) -> &mut Self {
        self.accepts.insert(s, pattern);
        self
    }

    /// Marks `s` accepting, keeping the smallest known pattern id when the
    /// state is already accepting.
    pub fn accept_merge(&mut self, s: StateId, pattern: Option<u32>) -> &mut Self {
        let slot = self.accepts.entry(s).or_insert(pattern);
        *slot = match (*slot, pattern) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    pub fn deterministic(&mut self, flag: bool) -> &mut Self {
        self.deterministic = flag;
        self
    }

    pub fn component_labels(&mut self, labels: Option<Vec<u32>>) -> &mut Self {
        self.component_labels = labels;
        self
    }

    pub fn build(self) -> Automaton {
        let AutomatonBuilder {
            state_count,
            mut edges,
            mut epsilon,
            starts,
            accepts,
            deterministic,
            component_labels,
        } = self;
        edges.sort_unstable();
        edges.dedup();
        epsilon.sort_unstable();
        epsilon.dedup();
        let edge_offsets = offsets(state_count, edges.iter().map(|e| e.src));
        let eps_offsets = offsets(state_count, epsilon.iter().map(|e| e.0));
        Automaton {
            state_count,
            edges,
            epsilon,
            starts,
            accepts,
            deterministic,
            component_labels,
            edge_offsets,
            eps_offsets,
        }
    }
}

// Offsets of each source in a src-sorted list. Sources >= n are ignored.
fn offsets(n: usize, srcs: impl Iterator<Item = StateId>) -> Vec<usize> {
    let mut counts = vec![0usize; n + 1];
    for s in srcs {
        if s.index() < n {
            counts[s.index() + 1] += 1;
        }
    }
    for i in 0..n {
        counts[i + 1] += counts[i];
    }
    counts
}

/// Summary counts used by reports and the `stats` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    pub state_count: usize,
    pub transition_count: usize,
    pub max_fanout: usize,
    pub avg_fanout: f64,
    pub accept_count: usize,
    pub start_count: usize,
}

impl Automaton {
    pub fn builder() -> AutomatonBuilder {
        AutomatonBuilder::new()
    }

    /// Back to a builder holding the same content.
    pub fn to_builder(&self) -> AutomatonBuilder {
        AutomatonBuilder {
            state_count: self.state_count,
            edges: self.edges.clone(),
            epsilon: self.epsilon.clone(),
            starts: self.starts.clone(),
            accepts: self.accepts.clone(),
            deterministic: self.deterministic,
            component_labels: self.component_labels.clone(),
        }
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.state_count).map(StateId::new)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn epsilon_edges(&self) -> &[(StateId, StateId)] {
        &self.epsilon
    }

    pub fn has_epsilon(&self) -> bool {
        !self.epsilon.is_empty()
    }

    /// Outgoing labeled edges of `s`, sorted by `(class, dst)`.
    pub fn out_edges(&self, s: StateId) -> &[Edge] {
        match self.edge_offsets.get(s.index()..s.index() + 2) {
            Some(w) => &self.edges[w[0]..w[1]],
            None => &[],
        }
    }

    pub fn out_epsilon(&self, s: StateId) -> impl Iterator<Item = StateId> + '_ {
        let range = match self.eps_offsets.get(s.index()..s.index() + 2) {
            Some(w) => w[0]..w[1],
            None => 0..0,
        };
        self.epsilon[range].iter().map(|e| e.1)
    }

    pub fn starts(&self) -> &BTreeMap<StateId, StartKind> {
        &self.starts
    }

    pub fn start_kind(&self, s: StateId) -> StartKind {
        self.starts.get(&s).copied().unwrap_or_default()
    }

    pub fn accepts(&self) -> &BTreeMap<StateId, Option<u32>> {
        &self.accepts
    }

    pub fn is_accept(&self, s: StateId) -> bool {
        self.accepts.contains_key(&s)
    }

    /// Pattern attribution of an accepting state, falling back to the
    /// component label of the state.
    pub fn accept_pattern(&self, s: StateId) -> Option<u32> {
        self.accepts
            .get(&s)
            .copied()
            .flatten()
            .or_else(|| self.component_label(s))
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn component_labels(&self) -> Option<&[u32]> {
        self.component_labels.as_deref()
    }

    pub fn component_label(&self, s: StateId) -> Option<u32> {
        self.component_labels.as_ref().and_then(|l| l.get(s.index()).copied())
    }

    pub fn has_all_input_start(&self) -> bool {
        self.starts.values().any(|&k| k == StartKind::AllInput)
    }

    /// Every invariant violation, in a stable order. Empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let n = self.state_count;
        let mut out = Vec::new();
        for e in &self.edges {
            if e.src.index() >= n {
                out.push(format!("edge source out of range: {} -> {} ({n} states)", e.src, e.dst));
            }
            if e.dst.index() >= n {
                out.push(format!("edge target out of range: {} -> {} ({n} states)", e.src, e.dst));
            }
            if e.class.is_empty() {
                out.push(format!("empty symbol class on edge {} -> {}", e.src, e.dst));
            }
        }
        for &(s, d) in &self.epsilon {
            if s.index() >= n || d.index() >= n {
                out.push(format!("epsilon edge out of range: {s} -> {d} ({n} states)"));
            }
        }
        for s in self.starts.keys() {
            if s.index() >= n {
                out.push(format!("start state out of range: {s} ({n} states)"));
            }
        }
        for s in self.accepts.keys() {
            if s.index() >= n {
                out.push(format!("accept state out of range: {s} ({n} states)"));
            }
        }
        if self.starts.is_empty() {
            out.push("no start state".to_string());
        }
        if self.deterministic {
            if let Err(msg) = self.check_deterministic() {
                out.push(msg);
            }
        }
        if let Some(labels) = &self.component_labels {
            if labels.len() != n {
                out.push(format!(
                    "component labels cover {} states, automaton has {n}",
                    labels.len()
                ));
            } else {
                let crossing = self
                    .edges
                    .iter()
                    .map(|e| (e.src, e.dst))
                    .chain(self.epsilon.iter().copied())
                    .filter(|(s, d)| s.index() < n && d.index() < n)
                    .find(|(s, d)| labels[s.index()] != labels[d.index()]);
                if let Some((s, d)) = crossing {
                    out.push(format!("edge {s} -> {d} crosses component label boundary"));
                }
            }
        }
        out
    }

    pub fn validated(self) -> Result<Self> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid(v))
        }
    }

    /// Structural determinism: no epsilon edges, exactly one start of kind
    /// StartOfData, pairwise-disjoint outgoing classes.
    pub fn check_deterministic(&self) -> std::result::Result<(), String> {
        if !self.epsilon.is_empty() {
            return Err("deterministic automaton has epsilon edges".into());
        }
        let sod = self.starts.values().filter(|&&k| k == StartKind::StartOfData).count();
        if self.starts.len() != 1 || sod != 1 {
            return Err(format!(
                "deterministic automaton must have exactly one StartOfData start, found {} start(s)",
                self.starts.len()
            ));
        }
        for s in self.states() {
            let mut seen = SymbolClass::EMPTY;
            for e in self.out_edges(s) {
                if seen.intersects(&e.class) {
                    return Err(format!("nondeterministic choice at state {s}"));
                }
                seen = seen.union(&e.class);
            }
        }
        Ok(())
    }

    pub fn stats(&self) -> StatsSummary {
        let mut fanout = vec![0usize; self.state_count];
        for e in &self.edges {
            if let Some(f) = fanout.get_mut(e.src.index()) {
                *f += 1;
            }
        }
        for &(s, _) in &self.epsilon {
            if let Some(f) = fanout.get_mut(s.index()) {
                *f += 1;
            }
        }
        let transition_count = self.edges.len() + self.epsilon.len();
        StatsSummary {
            state_count: self.state_count,
            transition_count,
            max_fanout: fanout.iter().copied().max().unwrap_or(0),
            avg_fanout: if self.state_count == 0 {
                0.0
            } else {
                transition_count as f64 / self.state_count as f64
            },
            accept_count: self.accepts.len(),
            start_count: self.starts.len(),
        }
    }

    /// Applies a state renumbering. `map[old]` is the new id; `new_count`
    /// states in the result. Every old state must be mapped.
    pub(crate) fn renumber(&self, map: &[StateId], new_count: usize) -> Automaton {
        let mut b = AutomatonBuilder::with_states(new_count);
        for e in &self.edges {
            b.edge(map[e.src.index()], e.class, map[e.dst.index()]);
        }
        for &(s, d) in &self.epsilon {
            b.epsilon(map[s.index()], map[d.index()]);
        }
        for (&s, &k) in &self.starts {
            b.start(map[s.index()], k);
        }
        for (&s, &p) in &self.accepts {
            b.accept_merge(map[s.index()], p);
        }
        b.deterministic(self.deterministic);
        if let Some(labels) = &self.component_labels {
            let mut out = vec![0; new_count];
            for (old, &l) in labels.iter().enumerate() {
                out[map[old].index()] = l;
            }
            b.component_labels(Some(out));
        }
        b.build()
    }

    /// Renumbers states in breadth-first order from the starts.
    ///
    /// Starts are enqueued in ascending old index. From each state, labeled
    /// edges are followed in ascending `(class, old dst)` order, then epsilon
    /// edges in ascending old dst order. Unreachable states keep their
    /// relative order after all reachable ones. Idempotent.
    pub fn canonicalize(&self) -> Automaton {
        let n = self.state_count;
        let mut map: Vec<Option<StateId>> = vec![None; n];
        let mut next = 0usize;
        let mut queue = VecDeque::new();
        let mut visit = |s: StateId, map: &mut Vec<Option<StateId>>, queue: &mut VecDeque<StateId>| {
            if map[s.index()].is_none() {
                map[s.index()] = Some(StateId::new(next));
                next += 1;
                queue.push_back(s);
            }
        };
        for &s in self.starts.keys() {
            visit(s, &mut map, &mut queue);
        }
        while let Some(s) = queue.pop_front() {
            for e in self.out_edges(s) {
                visit(e.dst, &mut map, &mut queue);
            }
            for d in self.out_epsilon(s) {
                visit(d, &mut map, &mut queue);
            }
        }
        for s in 0..n {
            visit(StateId::new(s), &mut map, &mut queue);
        }
        let map: Vec<StateId> = map.into_iter().map(|m| m.expect("all states mapped")).collect();
        self.renumber(&map, n)
    }

    /// Merges parallel edges (same source and target) into one edge carrying
    /// the union class.
    pub fn merge_parallel_edges(&self) -> Automaton {
        let mut merged: BTreeMap<(StateId, StateId), SymbolClass> = BTreeMap::new();
        for e in &self.edges {
            let c = merged.entry((e.src, e.dst)).or_default();
            *c = c.union(&e.class);
        }
        let mut b = self.to_builder();
        b.edges = merged
            .into_iter()
            .map(|((src, dst), class)| Edge { src, class, dst })
            .collect();
        b.build()
    }

    /// Isomorphism of two deterministic automata: equality of their
    /// canonical forms (edges, classes, starts and accepting states).
    pub fn isomorphic(&self, other: &Automaton) -> Result<bool> {
        self.check_deterministic().map_err(Error::Nondeterministic)?;
        other.check_deterministic().map_err(Error::Nondeterministic)?;
        if self.state_count != other.state_count {
            return Ok(false);
        }
        let a = self.merge_parallel_edges().canonicalize();
        let b = other.merge_parallel_edges().canonicalize();
        let accepts = |x: &Automaton| x.accepts.keys().copied().collect::<BTreeSet<_>>();
        Ok(a.edges == b.edges && a.starts == b.starts && accepts(&a) == accepts(&b))
    }

    /// States reachable from any start through labeled or epsilon edges.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count];
        let mut stack: Vec<StateId> = self.starts.keys().copied().collect();
        for s in &stack {
            seen[s.index()] = true;
        }
        while let Some(s) = stack.pop() {
            for d in self.out_edges(s).iter().map(|e| e.dst).chain(self.out_epsilon(s)) {
                if !seen[d.index()] {
                    seen[d.index()] = true;
                    stack.push(d);
                }
            }
        }
        seen
    }

    /// States from which an accepting state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.state_count;
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for e in &self.edges {
            preds[e.dst.index()].push(e.src);
        }
        for &(s, d) in &self.epsilon {
            preds[d.index()].push(s);
        }
        let mut seen = vec![false; n];
        let mut stack: Vec<StateId> = self.accepts.keys().copied().collect();
        for s in &stack {
            seen[s.index()] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &preds[s.index()] {
                if !seen[p.index()] {
                    seen[p.index()] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Keeps only states in `keep`, renumbered in ascending order.
    pub fn restrict(&self, keep: &[bool]) -> Automaton {
        let mut map = vec![StateId(u32::MAX); self.state_count];
        let mut next = 0usize;
        for (s, &k) in keep.iter().enumerate() {
            if k {
                map[s] = StateId::new(next);
                next += 1;
            }
        }
        let kept = |s: StateId| keep[s.index()];
        let mut b = AutomatonBuilder::with_states(next);
        for e in self.edges.iter().filter(|e| kept(e.src) && kept(e.dst)) {
            b.edge(map[e.src.index()], e.class, map[e.dst.index()]);
        }
        for &(s, d) in self.epsilon.iter().filter(|(s, d)| kept(*s) && kept(*d)) {
            b.epsilon(map[s.index()], map[d.index()]);
        }
        for (&s, &k) in self.starts.iter().filter(|(s, _)| kept(**s)) {
            b.start(map[s.index()], k);
        }
        for (&s, &p) in self.accepts.iter().filter(|(s, _)| kept(**s)) {
            b.accept_with(map[s.index()], p);
        }
        b.deterministic(self.deterministic);
        if let Some(labels) = &self.component_labels {
            b.component_labels(Some(
                labels.iter().zip(keep).filter(|(_, &k)| k).map(|(&l, _)| l).collect(),
            ));
        }
        b.build()
    }

    /// Removes states that are unreachable or cannot reach an accepting
    /// state. Start states are always kept so the result stays valid.
    pub fn trim(&self) -> Automaton {
        let reach = self.reachable();
        let co = self.coreachable();
        let keep: Vec<bool> = (0..self.state_count)
            .map(|s| reach[s] && (co[s] || self.starts.contains_key(&StateId::new(s))))
            .collect();
        self.restrict(&keep)
    }

    /// Number of states that are both reachable and co-reachable.
    pub fn live_state_count(&self) -> usize {
        let reach = self.reachable();
        let co = self.coreachable();
        reach.iter().zip(&co).filter(|(a, b)| **a && **b).count()
    }
}
