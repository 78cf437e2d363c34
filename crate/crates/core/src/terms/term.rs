use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::position::Position;
use super::signature::{ConstId, OpId, Signature, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("position {0} does not exist in the term")]
    InvalidPosition(Position),
    #[error("`{symbol}` expects {expected} arguments, got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
}

/// A finite ranked tree over a [`Signature`] and the variables `x1, x2, …`.
///
/// Operation nodes can only be built through [`Signature::apply`], which
/// checks the arity, so every `Term` is well formed. Equality is
/// structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term(Node);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Var(Var),
    Const(ConstId),
    Apply(OpId, Box<[Term]>),
}

/// Borrowed view of the root of a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum View<'a> {
    Var(Var),
    Const(ConstId),
    Apply(OpId, &'a [Term]),
}

/// The root label `t(ε)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Head {
    Var(Var),
    Const(ConstId),
    Op(OpId),
}

impl Signature {
    /// Builds `op(children…)`, checking the arity.
    pub fn apply(&self, op: OpId, children: Vec<Term>) -> Result<Term, TermError> {
        let expected = self.arity(op);
        if children.len() != expected {
            return Err(TermError::ArityMismatch {
                symbol: self.op_name(op).to_string(),
                expected,
                found: children.len(),
            });
        }
        Ok(Term(Node::Apply(op, children.into_boxed_slice())))
    }
}

impl Term {
    pub fn var(v: Var) -> Term {
        Term(Node::Var(v))
    }

    pub fn constant(c: ConstId) -> Term {
        Term(Node::Const(c))
    }

    pub fn view(&self) -> View<'_> {
        match &self.0 {
            Node::Var(v) => View::Var(*v),
            Node::Const(c) => View::Const(*c),
            Node::Apply(op, children) => View::Apply(*op, children),
        }
    }

    pub fn head(&self) -> Head {
        match &self.0 {
            Node::Var(v) => Head::Var(*v),
            Node::Const(c) => Head::Const(*c),
            Node::Apply(op, _) => Head::Op(*op),
        }
    }

    pub fn children(&self) -> &[Term] {
        match &self.0 {
            Node::Apply(_, children) => children,
            _ => &[],
        }
    }

    pub fn as_var(&self) -> Option<Var> {
        match self.0 {
            Node::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        self.children()
            .iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Number of nodes, `|Pos(t)|`.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Term::size).sum::<usize>()
    }

    /// `Var(t)` in ascending index order.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match &self.0 {
            Node::Var(v) => {
                out.insert(*v);
            }
            Node::Const(_) => {}
            Node::Apply(_, children) => children.iter().for_each(|c| c.collect_vars(out)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match &self.0 {
            Node::Var(_) => false,
            Node::Const(_) => true,
            Node::Apply(_, children) => children.iter().all(Term::is_ground),
        }
    }

    /// `Pos(t)` in length-lexicographic order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::with_capacity(self.size());
        self.preorder(&mut Position::root(), &mut |p, _| out.push(p.clone()));
        out.sort();
        out
    }

    /// Visits every node in preorder (leftmost first) with its position.
    pub fn preorder<'a>(&'a self, at: &mut Position, visit: &mut impl FnMut(&Position, &'a Term)) {
        visit(at, self);
        for (i, child) in self.children().iter().enumerate() {
            *at = at.child(i as u32 + 1);
            child.preorder(at, visit);
            *at = at.parent().expect("child position has a parent");
        }
    }

    /// Positions of every occurrence of `x`, leftmost first.
    pub fn occurrences(&self, x: Var) -> Vec<Position> {
        let mut out = Vec::new();
        self.preorder(&mut Position::root(), &mut |p, t| {
            if t.as_var() == Some(x) {
                out.push(p.clone());
            }
        });
        out
    }

    /// `t|_p`.
    pub fn subterm(&self, p: &Position) -> Result<&Term, TermError> {
        let mut cur = self;
        for &step in p.steps() {
            cur = cur
                .children()
                .get(step as usize - 1)
                .ok_or_else(|| TermError::InvalidPosition(p.clone()))?;
        }
        Ok(cur)
    }

    /// `t[u]_p`.
    pub fn replace_at(&self, p: &Position, u: Term) -> Result<Term, TermError> {
        self.subterm(p)?;
        Ok(self.replace_steps(p.steps(), u))
    }

    fn replace_steps(&self, steps: &[u32], u: Term) -> Term {
        match (steps.split_first(), &self.0) {
            (None, _) => u,
            (Some((&i, rest)), Node::Apply(op, children)) => {
                let mut children = children.to_vec();
                let slot = &mut children[i as usize - 1];
                *slot = slot.replace_steps(rest, u);
                Term(Node::Apply(*op, children.into_boxed_slice()))
            }
            (Some(_), _) => unreachable!("position validated before replacement"),
        }
    }

    /// Simultaneous substitution `t(x ← s_x)`. Unbound variables are kept.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Term>) -> Term {
        match &self.0 {
            Node::Var(v) => bindings.get(v).cloned().unwrap_or_else(|| self.clone()),
            Node::Const(_) => self.clone(),
            Node::Apply(op, children) => Term(Node::Apply(
                *op,
                children.iter().map(|c| c.substitute(bindings)).collect(),
            )),
        }
    }

    /// Substitutes a single variable.
    pub fn substitute_one(&self, x: Var, s: &Term) -> Term {
        self.substitute(&BTreeMap::from([(x, s.clone())]))
    }

    /// The subterms at every prefix of `p`, innermost first:
    /// `[t|_p, …, t|_ε]`. Consecutive elements are one tree level apart.
    pub fn root_path_chain(&self, p: &Position) -> Result<Vec<&Term>, TermError> {
        self.subterm(p)?;
        Ok(p.prefixes()
            .map(|q| self.subterm(&q).expect("prefix of a valid position"))
            .collect())
    }
}
