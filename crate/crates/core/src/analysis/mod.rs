//! Semantic tables of terms and everything computed from them: essential and
//! fictive inputs, equivalence, chain certificates, strongly essential
//! inputs.

mod chain;
mod essential;
mod state_function;
mod strong;

use thiserror::Error;

use crate::automaton::CapExceeded;
use crate::terms::Var;

pub use chain::{essential_chain, ChainAttempt, ChainCertificate, ChainLink, ChainSearchTrace};
pub use essential::{classify, essential_inputs, essential_inputs_by_pairs, Essentiality};
pub use state_function::{equivalent, state_function, StateFunction};
pub use strong::{check_theorem2, strongly_essential, StrongWitnesses, Theorem2Report};

pub(crate) use state_function::Tabulator;

fn list(vars: &[Var]) -> String {
    vars.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    CapExceeded(#[from] CapExceeded),
    #[error("{0} is not an essential input")]
    NotEssential(Var),
    #[error("not essential inputs: {}", list(.0))]
    NotASubset(Vec<Var>),
    #[error("the reference set of inputs is empty")]
    EmptyReferenceSet,
    #[error("no chain of essential subterms reaches the root: {0}")]
    TheoremViolation(Box<ChainSearchTrace>),
}
