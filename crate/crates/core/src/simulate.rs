//! Multi-active-state simulation over byte streams and active-rule
//! analytics.
//!
//! Cycle `t` consumes `input[t]`. The set active at cycle `t` is the epsilon
//! closure of the states reached from the previous set on `input[t]`, joined
//! with the closure of every AllInput start. Before the first cycle the
//! StartOfData and AllInput starts (closed) are active; that initial set is
//! kept in [`SimulationTrace::initial_active`] but is not a cycle.
//!
//! Rule analytics look at the set each rule carries *into* a cycle, i.e. the
//! states that examine `input[t]`: the initial set for cycle 0 and the set
//! active at cycle `t - 1` afterwards.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::automaton::{Automaton, StartKind, StateId};
use crate::error::{Error, Result};
use crate::transform::epsilon::Closure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Report {
    pub cycle: usize,
    pub state: StateId,
    pub pattern: Option<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationTrace {
    pub cycles: usize,
    pub initial_active: Vec<StateId>,
    /// Sorted active set after each cycle.
    pub per_cycle_active: Vec<Vec<StateId>>,
    /// At most one report per (cycle, pattern): the lowest accepting state.
    pub reports: Vec<Report>,
    /// Cycles in which each state was active, indexed by state.
    pub per_state_activation_count: Vec<u64>,
    /// Edge and epsilon-edge visits performed.
    pub work: u64,
}

impl SimulationTrace {
    /// Cycles at which at least one report was recorded.
    pub fn report_cycles(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.reports.iter().map(|r| r.cycle).collect();
        set.into_iter().collect()
    }

    /// One line per cycle: `cycle<TAB>active_count<TAB>report_list`, where
    /// the report list is `pattern:state` items joined by commas, `_` for
    /// an unattributed pattern, and `-` when nothing was reported.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        let mut reports = self.reports.iter().peekable();
        for (t, active) in self.per_cycle_active.iter().enumerate() {
            let mut items = Vec::new();
            while let Some(r) = reports.next_if(|r| r.cycle == t) {
                let p = r.pattern.map_or_else(|| "_".to_string(), |p| p.to_string());
                items.push(format!("{p}:{}", r.state));
            }
            let list = if items.is_empty() { "-".to_string() } else { items.join(",") };
            let _ = writeln!(out, "{t}\t{}\t{list}", active.len());
        }
        out
    }
}

struct Stepper<'a> {
    a: &'a Automaton,
    closure: Closure,
    mark: Vec<u32>,
    generation: u32,
    always: Vec<StateId>,
    work: u64,
}

impl<'a> Stepper<'a> {
    fn new(a: &'a Automaton) -> Self {
        let mut closure = Closure::new(a.state_count());
        let mut always: Vec<StateId> = a
            .starts()
            .iter()
            .filter(|(_, &k)| k == StartKind::AllInput)
            .map(|(&s, _)| s)
            .collect();
        closure.close(a, &mut always);
        Stepper { a, closure, mark: vec![0; a.state_count()], generation: 0, always, work: 0 }
    }

    fn initial(&mut self) -> Vec<StateId> {
        let mut set: Vec<StateId> = self
            .a
            .starts()
            .iter()
            .filter(|(_, &k)| k != StartKind::None)
            .map(|(&s, _)| s)
            .collect();
        self.close(&mut set);
        set
    }

    fn close(&mut self, set: &mut Vec<StateId>) {
        self.work += set.iter().map(|&s| self.a.out_epsilon(s).count() as u64).sum::<u64>();
        self.closure.close(self.a, set);
    }

    fn step(&mut self, current: &[StateId], byte: u8) -> Vec<StateId> {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.generation = 1;
        }
        let g = self.generation;
        let mut next = Vec::new();
        for &s in current {
            for e in self.a.out_edges(s) {
                self.work += 1;
                if e.class.contains(byte) && self.mark[e.dst.index()] != g {
                    self.mark[e.dst.index()] = g;
                    next.push(e.dst);
                }
            }
        }
        next.extend(self.always.iter().copied());
        self.close(&mut next);
        next
    }
}

/// Simulates `a` on `input`, recording every cycle.
pub fn run(a: &Automaton, input: &[u8]) -> SimulationTrace {
    let mut stepper = Stepper::new(a);
    let initial_active = stepper.initial();
    let mut per_cycle_active = Vec::with_capacity(input.len());
    let mut reports = Vec::new();
    let mut counts = vec![0u64; a.state_count()];
    let mut current = initial_active.clone();
    for (t, &byte) in input.iter().enumerate() {
        current = stepper.step(&current, byte);
        let mut seen = BTreeSet::new();
        for &s in &current {
            counts[s.index()] += 1;
            if a.is_accept(s) {
                let pattern = a.accept_pattern(s);
                if seen.insert(pattern) {
                    reports.push(Report { cycle: t, state: s, pattern });
                }
            }
        }
        per_cycle_active.push(current.clone());
    }
    SimulationTrace {
        cycles: input.len(),
        initial_active,
        per_cycle_active,
        reports,
        per_state_activation_count: counts,
        work: stepper.work,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ActiveRuleStats {
    /// Rules holding at least one active state entering each cycle.
    pub per_cycle_rule_count: Vec<usize>,
    /// Of those, rules whose active states all lie in their start closure.
    pub per_cycle_start_only: Vec<usize>,
    pub min_active: usize,
    pub max_active: usize,
    /// Mean over cycles with an active rule of start-only / active, in
    /// percent. `None` unless every rule has exactly one start state.
    pub start_only_fraction: Option<f64>,
}

fn single_start(a: &Automaton) -> Option<StateId> {
    let mut starts = a.starts().iter().filter(|(_, &k)| k != StartKind::None);
    match (starts.next(), starts.next()) {
        (Some((&s, _)), None) => Some(s),
        _ => None,
    }
}

/// Per-cycle active-rule counts over independently simulated rules.
pub fn active_rule_frequency(components: &[Automaton], input: &[u8]) -> ActiveRuleStats {
    let cycles = input.len();
    let mut rule_count = vec![0usize; cycles];
    let mut start_only = vec![0usize; cycles];
    let mut all_single = true;
    for c in components {
        let home = single_start(c).map(|s| {
            let mut set = vec![s];
            Closure::new(c.state_count()).close(c, &mut set);
            set
        });
        all_single &= home.is_some();
        let mut stepper = Stepper::new(c);
        let mut entering = stepper.initial();
        for t in 0..cycles {
            if !entering.is_empty() {
                rule_count[t] += 1;
                if let Some(home) = &home {
                    if entering.iter().all(|s| home.binary_search(s).is_ok()) {
                        start_only[t] += 1;
                    }
                }
            }
            if t + 1 < cycles {
                entering = stepper.step(&entering, input[t]);
            }
        }
    }
    let fraction = all_single.then(|| {
        let ratios: Vec<f64> = rule_count
            .iter()
            .zip(&start_only)
            .filter(|(&n, _)| n > 0)
            .map(|(&n, &k)| 100.0 * k as f64 / n as f64)
            .collect();
        if ratios.is_empty() {
            0.0
        } else {
            ratios.iter().sum::<f64>() / ratios.len() as f64
        }
    });
    ActiveRuleStats {
        min_active: rule_count.iter().copied().min().unwrap_or(0),
        max_active: rule_count.iter().copied().max().unwrap_or(0),
        per_cycle_rule_count: rule_count,
        per_cycle_start_only: start_only,
        start_only_fraction: fraction,
    }
}

/// Average percentage of active rules that have not left their start state.
/// Every rule must have exactly one start state.
pub fn start_only_fraction(components: &[Automaton], input: &[u8]) -> Result<f64> {
    let bad: Vec<String> = components
        .iter()
        .enumerate()
        .filter(|(_, c)| single_start(c).is_none())
        .map(|(i, c)| format!("rule {i} has {} start states", c.starts().len()))
        .collect();
    if !bad.is_empty() {
        return Err(Error::Invalid(bad));
    }
    Ok(active_rule_frequency(components, input).start_only_fraction.unwrap_or(0.0))
}

/// Scan throughput in Gbps: `bits / 1e9 / seconds`.
pub fn throughput_gbps(input_bits: f64, seconds: f64) -> Result<f64> {
    if !seconds.is_finite() || seconds <= 0.0 {
        return Err(Error::InvalidArgument(format!("scan time must be positive, got {seconds}")));
    }
    if input_bits.is_nan() || input_bits < 0.0 {
        return Err(Error::InvalidArgument(format!("input size must be non-negative, got {input_bits}")));
    }
    Ok(input_bits / 1e9 / seconds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::compile_regex;
    use crate::transform::determinize;

    fn re(t: &str, k: StartKind) -> Automaton {
        compile_regex(t, k).unwrap()
    }

    #[test]
    fn literal_reports() {
        let a = re("ab", StartKind::StartOfData);
        assert_eq!(run(&a, b"ab").report_cycles(), vec![1]);
        assert!(run(&a, b"xab").reports.is_empty());
        let u = re("ab", StartKind::AllInput);
        assert_eq!(run(&u, b"xab").report_cycles(), vec![2]);
    }

    #[test]
    fn empty_input() {
        let a = re("ab", StartKind::StartOfData);
        let t = run(&a, b"");
        assert_eq!(t.cycles, 0);
        assert!(t.per_cycle_active.is_empty());
        assert_eq!(t.initial_active, vec![StateId(0)]);
        let s = active_rule_frequency(&[a], b"");
        assert!(s.per_cycle_rule_count.is_empty());
        assert_eq!((s.min_active, s.max_active), (0, 0));
    }

    #[test]
    fn dfa_has_one_active_state() {
        let d = determinize(&re("(a|b)*ab(a|b)", StartKind::AllInput)).unwrap();
        let t = run(&d, b"abbaabab");
        assert!(t.per_cycle_active.iter().all(|s| s.len() <= 1));
    }

    #[test]
    fn duplicate_reports_collapse() {
        let a = re("a|a", StartKind::StartOfData);
        assert_eq!(run(&a, b"a").reports.len(), 1);
    }

    #[test]
    fn trace_lines() {
        let a = re("ab", StartKind::AllInput);
        let lines = run(&a, b"ab").to_lines();
        let rows: Vec<&str> = lines.lines().collect();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].starts_with("0\t"));
        assert!(rows[0].ends_with("\t-"));
        assert_eq!(rows[1], "1\t2\t_:3");
    }

    #[test]
    fn three_literals() {
        let rules = |k| vec![re("ab", k), re("cd", k), re("ef", k)];
        let s = active_rule_frequency(&rules(StartKind::AllInput), b"ab");
        assert_eq!(s.per_cycle_rule_count, vec![3, 3]);
        let s = active_rule_frequency(&rules(StartKind::StartOfData), b"ab");
        assert_eq!(s.per_cycle_rule_count, vec![3, 1]);
    }

    #[test]
    fn anchored_misses_die_after_first_cycle() {
        let rules: Vec<Automaton> =
            ["xy", "zw", "qq", "rr"].iter().map(|t| re(t, StartKind::StartOfData)).collect();
        let s = active_rule_frequency(&rules, b"abcab");
        assert_eq!(s.per_cycle_rule_count, vec![4, 0, 0, 0, 0]);
        assert_eq!(s.max_active, 4);
        assert_eq!(s.min_active, 0);
    }

    #[test]
    fn start_only_examples() {
        let zz = re("zz", StartKind::AllInput);
        assert_eq!(start_only_fraction(std::slice::from_ref(&zz), b"aaaa").unwrap(), 100.0);
        // cycle 0 sees only the start; afterwards the middle state is active too
        let aa = re("aa", StartKind::AllInput);
        assert_eq!(start_only_fraction(std::slice::from_ref(&aa), b"aaaa").unwrap(), 25.0);
        let s = active_rule_frequency(&[aa, zz], b"aaaa");
        assert_eq!(s.per_cycle_rule_count, vec![2, 2, 2, 2]);
        assert_eq!(s.per_cycle_start_only, vec![2, 1, 1, 1]);
        assert_eq!(s.start_only_fraction, Some(62.5));
    }

    #[test]
    fn multiple_starts_flagged() {
        let mut b = re("a", StartKind::StartOfData).to_builder();
        b.start(StateId(1), StartKind::AllInput);
        assert!(start_only_fraction(&[b.build()], b"a").is_err());
    }

    #[test]
    fn throughput_examples() {
        assert_eq!(throughput_gbps(1e9, 1.0).unwrap(), 1.0);
        assert_eq!(throughput_gbps(2e9, 0.5).unwrap(), 4.0);
        assert_eq!(throughput_gbps(0.0, 1.0).unwrap(), 0.0);
        assert!(throughput_gbps(1e9, 0.0).is_err());
        assert!(throughput_gbps(1e9, -1.0).is_err());
    }
}
