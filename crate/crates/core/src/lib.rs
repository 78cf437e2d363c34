//! Finite bottom-up tree automata over ranked signatures, essential and
//! strongly essential inputs of trees, and tree minimization.
//!
//! * [`terms`]: signatures, positions, terms and their text syntax.
//! * [`automaton`]: complete deterministic automata, runs and acceptance.
//! * [`analysis`]: state functions, essential inputs, chains, strongly
//!   essential inputs.
//! * [`reduce`]: minimization of trees with respect to an automaton.
//! * [`genrand`] and [`campaign`]: seeded instances and property campaigns.

pub mod analysis;
pub mod automaton;
pub mod campaign;
pub mod genrand;
pub mod parse;
pub mod reduce;
pub mod terms;
