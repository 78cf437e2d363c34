//! Term text syntax: `term := var | const | op '(' term (',' term)* ')'`.

use std::fmt;

use super::signature::{Signature, Symbol, Var};
use super::term::{Term, View};
use crate::parse::{is_variable_lexeme, Cursor, ParseError};

/// Parses a term. `#` starts a comment that runs to the end of the line.
pub fn parse_term(sig: &Signature, src: &str) -> Result<Term, ParseError> {
    let stripped = strip_comments(src);
    let mut cur = Cursor::new(&stripped, 1, 1);
    let term = parse_node(sig, &mut cur)?;
    cur.expect_end()?;
    Ok(term)
}

pub(crate) fn strip_comments(src: &str) -> String {
    src.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n")
}

pub(crate) fn parse_variable(name: &str) -> Option<Var> {
    if !is_variable_lexeme(name) {
        return None;
    }
    name[1..].parse::<u32>().ok().and_then(Var::new)
}

fn parse_node(sig: &Signature, cur: &mut Cursor<'_>) -> Result<Term, ParseError> {
    let (name, line, column) = cur.ident()?;
    let at = |msg: String| ParseError::new(line, column, msg);
    if is_variable_lexeme(&name) {
        let v = parse_variable(&name)
            .ok_or_else(|| at(format!("`{name}`: variable indices start at 1")))?;
        if cur.peek() == Some('(') {
            return Err(at(format!("variable `{name}` cannot take arguments")));
        }
        return Ok(Term::var(v));
    }
    match sig.lookup(&name) {
        None => Err(at(format!("unknown symbol `{name}`"))),
        Some(Symbol::Const(c)) => {
            if cur.peek() == Some('(') {
                return Err(at(format!("constant `{name}` cannot take arguments")));
            }
            Ok(Term::constant(c))
        }
        Some(Symbol::Op(op)) => {
            let arity = sig.arity(op);
            if cur.peek() != Some('(') {
                return Err(at(format!("`{name}` expects {arity} arguments")));
            }
            cur.expect('(')?;
            let mut children = vec![parse_node(sig, cur)?];
            while cur.eat(',') {
                children.push(parse_node(sig, cur)?);
            }
            cur.expect(')')?;
            sig.apply(op, children).map_err(|e| at(e.to_string()))
        }
    }
}

/// Displays a term in the text syntax.
pub struct TermDisplay<'a> {
    sig: &'a Signature,
    term: &'a Term,
}

impl Term {
    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { sig, term: self }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term.view() {
            View::Var(v) => write!(f, "{v}"),
            View::Const(c) => f.write_str(self.sig.const_name(c)),
            View::Apply(op, children) => {
                write!(f, "{}(", self.sig.op_name(op))?;
                for (i, child) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", child.display(self.sig))?;
                }
                f.write_str(")")
            }
        }
    }
}
