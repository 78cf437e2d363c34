//! Line-based automaton text format.
//!
//! ```text
//! states: q0 q1
//! final: q1
//! constants: 0 1
//! ops: f1/1 g1/2 g2/2
//! delta: 0 -> q0
//! delta: f1(q0) -> q1
//! delta: g2(q1,q1) -> q1
//! ```
//!
//! Declaration order of states and symbols is kept. `#` starts a comment.

use std::collections::HashSet;
use std::fmt::Write;

use super::machine::{Automaton, AutomatonDef, Rule};
use crate::parse::{is_ident, Cursor, ParseError};
use crate::terms::{strip_comments, Signature};

pub fn parse_automaton(src: &str) -> Result<AutomatonDef, ParseError> {
    let mut states = None;
    let mut finals = None;
    let mut constants = None;
    let mut ops: Option<(usize, Vec<(String, usize)>)> = None;
    let mut rules = Vec::new();
    let mut seen_lhs = HashSet::new();

    for (n, raw) in strip_comments(src).lines().enumerate() {
        let line_no = n + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let (key, rest) = raw
            .split_once(':')
            .ok_or_else(|| ParseError::new(line_no, 1, "expected `<key>: …`"))?;
        let rest_col = key.chars().count() + 2;
        let key = key.trim();
        let once = |slot: bool| {
            if slot {
                Err(ParseError::new(
                    line_no,
                    1,
                    format!("`{key}` is declared twice"),
                ))
            } else {
                Ok(())
            }
        };
        match key {
            "states" => {
                once(states.is_some())?;
                states = Some(names(rest, line_no, rest_col)?);
            }
            "final" => {
                once(finals.is_some())?;
                finals = Some(names(rest, line_no, rest_col)?);
            }
            "constants" => {
                once(constants.is_some())?;
                constants = Some((line_no, names(rest, line_no, rest_col)?));
            }
            "ops" => {
                once(ops.is_some())?;
                ops = Some((line_no, operators(rest, line_no, rest_col)?));
            }
            "delta" => {
                let rule = delta(rest, line_no, rest_col)?;
                if !seen_lhs.insert((rule.symbol.clone(), rule.args.clone())) {
                    return Err(ParseError::new(
                        line_no,
                        rest_col,
                        format!("duplicate transition for `{}`", rule.lhs()),
                    ));
                }
                rules.push(rule);
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    1,
                    format!("unknown key `{other}`"),
                ));
            }
        }
    }

    let missing = |what: &str| ParseError::new(1, 1, format!("missing `{what}:` line"));
    let states = states.ok_or_else(|| missing("states"))?;
    let (const_line, constants) = constants.ok_or_else(|| missing("constants"))?;
    let (op_line, ops) = ops.unwrap_or((const_line, Vec::new()));
    let signature = Signature::new(constants, ops)
        .map_err(|e| ParseError::new(const_line.max(op_line), 1, e.to_string()))?;
    Ok(AutomatonDef {
        signature,
        states,
        final_states: finals.unwrap_or_default(),
        rules,
    })
}

fn names(rest: &str, line: usize, col: usize) -> Result<Vec<String>, ParseError> {
    let mut out = Vec::new();
    let mut offset = col;
    for word in rest.split_inclusive(char::is_whitespace) {
        let name = word.trim();
        if !name.is_empty() && !is_ident(name) {
            return Err(ParseError::new(
                line,
                offset,
                format!("`{name}` is not a valid name"),
            ));
        }
        if !name.is_empty() {
            out.push(name.to_string());
        }
        offset += word.chars().count();
    }
    Ok(out)
}

fn operators(rest: &str, line: usize, col: usize) -> Result<Vec<(String, usize)>, ParseError> {
    rest.split_whitespace()
        .map(|item| {
            let bad =
                || ParseError::new(line, col, format!("`{item}` is not of the form name/arity"));
            let (name, arity) = item.split_once('/').ok_or_else(bad)?;
            let arity: usize = arity.parse().map_err(|_| bad())?;
            if !is_ident(name) {
                return Err(bad());
            }
            Ok((name.to_string(), arity))
        })
        .collect()
}

fn delta(rest: &str, line: usize, col: usize) -> Result<Rule, ParseError> {
    let (lhs, rhs) = rest
        .split_once("->")
        .ok_or_else(|| ParseError::new(line, col, "expected `<lhs> -> <state>`"))?;
    let mut cur = Cursor::new(lhs, line, col);
    let (symbol, _, _) = cur.ident()?;
    let mut args = Vec::new();
    if cur.eat('(') {
        args.push(cur.ident()?.0);
        while cur.eat(',') {
            args.push(cur.ident()?.0);
        }
        cur.expect(')')?;
    }
    cur.expect_end()?;
    let rhs_col = col + lhs.chars().count() + 2;
    let mut cur = Cursor::new(rhs, line, rhs_col);
    let (target, _, _) = cur.ident()?;
    cur.expect_end()?;
    Ok(Rule {
        symbol,
        args,
        target,
    })
}

/// Writes an automaton in canonical form: one `delta` line per transition,
/// constants first, then operators in declaration order with argument
/// tuples in lexicographic order.
pub fn write_automaton(a: &Automaton) -> String {
    let def = a.to_def();
    let sig = &def.signature;
    let mut out = String::new();
    let _ = writeln!(out, "states: {}", def.states.join(" "));
    let _ = writeln!(out, "final: {}", def.final_states.join(" "));
    let consts: Vec<&str> = sig.constants().map(|c| sig.const_name(c)).collect();
    let _ = writeln!(out, "constants: {}", consts.join(" "));
    let ops: Vec<String> = sig
        .operators()
        .map(|op| format!("{}/{}", sig.op_name(op), sig.arity(op)))
        .collect();
    let _ = writeln!(out, "ops: {}", ops.join(" "));
    for rule in &def.rules {
        let _ = writeln!(out, "delta: {} -> {}", rule.lhs(), rule.target);
    }
    out
}

impl Automaton {
    pub fn to_text(&self) -> String {
        write_automaton(self)
    }
}
