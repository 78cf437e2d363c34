use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::parse::{is_ident, is_variable_lexeme};

/// Index of a nullary symbol in its signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstId(pub(crate) u32);

impl ConstId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index of an operation symbol of arity at least one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpId(pub(crate) u32);

impl OpId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An input variable `x<i>`, `i >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub fn new(index: u32) -> Option<Var> {
        (index >= 1).then_some(Var(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Const(ConstId),
    Op(OpId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("a signature needs at least one constant")]
    NoConstants,
    #[error("symbol `{0}` is declared twice")]
    DuplicateSymbol(String),
    #[error("`{0}` is not a valid symbol name")]
    InvalidName(String),
    #[error("`{0}` is reserved for variables")]
    ReservedName(String),
    #[error("operation symbol `{0}` must have arity at least 1")]
    ZeroArity(String),
}

/// A ranked alphabet: constants plus operation symbols with their arities.
///
/// Declaration order is significant. It fixes the enumeration order of
/// assignments and the order in which constants are tried as witnesses.
#[derive(Clone, Debug)]
pub struct Signature {
    constants: Vec<String>,
    operators: Vec<(String, usize)>,
    by_name: HashMap<String, Symbol>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.constants == other.constants && self.operators == other.operators
    }
}

impl Eq for Signature {}

impl Signature {
    pub fn new(
        constants: Vec<String>,
        operators: Vec<(String, usize)>,
    ) -> Result<Signature, SignatureError> {
        if constants.is_empty() {
            return Err(SignatureError::NoConstants);
        }
        let mut by_name = HashMap::new();
        let names = constants
            .iter()
            .enumerate()
            .map(|(i, c)| (c, Symbol::Const(ConstId(i as u32))))
            .chain(
                operators
                    .iter()
                    .enumerate()
                    .map(|(i, (o, _))| (o, Symbol::Op(OpId(i as u32)))),
            );
        for (name, sym) in names {
            if !is_ident(name) {
                return Err(SignatureError::InvalidName(name.clone()));
            }
            if is_variable_lexeme(name) {
                return Err(SignatureError::ReservedName(name.clone()));
            }
            if by_name.insert(name.clone(), sym).is_some() {
                return Err(SignatureError::DuplicateSymbol(name.clone()));
            }
        }
        if let Some((name, _)) = operators.iter().find(|(_, arity)| *arity == 0) {
            return Err(SignatureError::ZeroArity(name.clone()));
        }
        Ok(Signature {
            constants,
            operators,
            by_name,
        })
    }

    /// Convenience constructor for literal signatures.
    pub fn from_names(
        constants: &[&str],
        operators: &[(&str, usize)],
    ) -> Result<Signature, SignatureError> {
        Signature::new(
            constants.iter().map(|s| s.to_string()).collect(),
            operators.iter().map(|(s, a)| (s.to_string(), *a)).collect(),
        )
    }

    pub fn num_constants(&self) -> usize {
        self.constants.len()
    }

    pub fn num_operators(&self) -> usize {
        self.operators.len()
    }

    pub fn constants(&self) -> impl ExactSizeIterator<Item = ConstId> + Clone {
        (0..self.constants.len() as u32).map(ConstId)
    }

    pub fn operators(&self) -> impl ExactSizeIterator<Item = OpId> + Clone {
        (0..self.operators.len() as u32).map(OpId)
    }

    pub fn const_name(&self, c: ConstId) -> &str {
        &self.constants[c.index()]
    }

    pub fn op_name(&self, op: OpId) -> &str {
        &self.operators[op.index()].0
    }

    pub fn arity(&self, op: OpId) -> usize {
        self.operators[op.index()].1
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.by_name.get(name).copied()
    }

    pub fn constant(&self, name: &str) -> Option<ConstId> {
        match self.lookup(name)? {
            Symbol::Const(c) => Some(c),
            Symbol::Op(_) => None,
        }
    }

    pub fn operator(&self, name: &str) -> Option<OpId> {
        match self.lookup(name)? {
            Symbol::Op(op) => Some(op),
            Symbol::Const(_) => None,
        }
    }

    /// The distinct positive arities in use.
    pub fn arities(&self) -> BTreeSet<usize> {
        self.operators.iter().map(|(_, a)| *a).collect()
    }

    pub fn contains_const(&self, c: ConstId) -> bool {
        c.index() < self.constants.len()
    }

    pub fn contains_op(&self, op: OpId) -> bool {
        op.index() < self.operators.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_signatures() {
        assert_eq!(
            Signature::from_names(&[], &[("f", 1)]).unwrap_err(),
            SignatureError::NoConstants
        );
        assert_eq!(
            Signature::from_names(&["a", "a"], &[]).unwrap_err(),
            SignatureError::DuplicateSymbol("a".into())
        );
        assert_eq!(
            Signature::from_names(&["a"], &[("a", 2)]).unwrap_err(),
            SignatureError::DuplicateSymbol("a".into())
        );
        assert_eq!(
            Signature::from_names(&["x3"], &[]).unwrap_err(),
            SignatureError::ReservedName("x3".into())
        );
        assert_eq!(
            Signature::from_names(&["a"], &[("f", 0)]).unwrap_err(),
            SignatureError::ZeroArity("f".into())
        );
        assert_eq!(
            Signature::from_names(&["a("], &[]).unwrap_err(),
            SignatureError::InvalidName("a(".into())
        );
    }

    #[test]
    fn lookups() {
        let sig = Signature::from_names(&["0", "1"], &[("f1", 1), ("g1", 2)]).unwrap();
        assert_eq!(sig.constant("1"), Some(ConstId(1)));
        assert_eq!(sig.operator("g1"), Some(OpId(1)));
        assert_eq!(sig.operator("0"), None);
        assert_eq!(sig.arity(OpId(1)), 2);
        assert_eq!(sig.arities().into_iter().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(Var::new(0), None);
        assert_eq!(Var::new(2).unwrap().to_string(), "x2");
    }
}
