//! Finite-automaton construction, transformation and measurement for
//! studying how automaton size grows with pattern size.
//!
//! The pipeline is: build an [`Automaton`] from a regex or a generator,
//! reduce it (epsilon removal, [`optimize_nfa`]), determinize and minimize
//! it, then measure it with the simulator or the experiment drivers.

pub mod automaton;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod io;
pub mod regex;
pub mod simulate;
pub mod symbol;
pub mod transform;

pub use automaton::{Automaton, AutomatonBuilder, Edge, StartKind, StateId, StatsSummary};
pub use error::{Error, Result};
pub use symbol::SymbolClass;
pub use transform::{
    brute_force_minimal_states, connected_components, determinize, equivalent, merge_patterns,
    minimize, optimize_nfa, remove_epsilon, Minimizer,
};
