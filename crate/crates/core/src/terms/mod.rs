//! Ranked signatures and terms addressed by positions.

mod position;
mod signature;
mod syntax;
mod term;

pub use position::{Position, PositionParseError};
pub use signature::{ConstId, OpId, Signature, SignatureError, Symbol, Var};
pub use syntax::{parse_term, TermDisplay};
pub use term::{Head, Term, TermError, View};

pub(crate) use syntax::{parse_variable, strip_comments};
