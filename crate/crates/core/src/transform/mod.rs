//! Language-preserving transformations and their verification oracles.

mod alphabet;
mod components;
mod determinize;
pub(crate) mod epsilon;
mod minimize;
mod optimize;
mod verify;

pub use components::{connected_components, merge_patterns};
pub use determinize::{determinize, determinize_with, Determinized, DeterminizeOptions, DEFAULT_STATE_CAP};
pub use epsilon::{lower_all_input, remove_epsilon, reverse};
pub use minimize::{
    minimize, minimize_brzozowski, minimize_brzozowski_with, minimize_hopcroft, Minimizer,
};
pub use optimize::optimize_nfa;
pub use verify::{brute_force_minimal_states, equivalent, equivalent_with, BRUTE_FORCE_LIMIT};
