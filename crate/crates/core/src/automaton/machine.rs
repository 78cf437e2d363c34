use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use super::assignment::{check_cap, enumerate_assignments, Assignment, CapExceeded};
use crate::terms::{ConstId, OpId, Signature, Symbol, Term, Var, View};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub(crate) u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One transition `symbol(args…) -> target`, by name. Constants have no
/// arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub symbol: String,
    pub args: Vec<String>,
    pub target: String,
}

impl Rule {
    pub fn lhs(&self) -> String {
        if self.args.is_empty() {
            self.symbol.clone()
        } else {
            format!("{}({})", self.symbol, self.args.join(","))
        }
    }
}

/// A transition that a complete automaton must define but the definition
/// lacks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MissingTransition {
    pub symbol: String,
    pub states: Vec<String>,
}

impl fmt::Display for MissingTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.states.is_empty() {
            f.write_str(&self.symbol)
        } else {
            write!(f, "{}({})", self.symbol, self.states.join(","))
        }
    }
}

fn list_missing(missing: &[MissingTransition]) -> String {
    missing
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("state `{0}` is declared twice")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` has arity {expected} but the rule gives {found} arguments")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("transition for `{0}` is defined twice")]
    DuplicateRule(String),
    #[error("incomplete transition function, missing: {}", list_missing(.0))]
    IncompleteDelta(Vec<MissingTransition>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("variable {0} is not bound by the assignment")]
    UnboundVariable(Var),
}

/// An automaton as written down: states and rules by name, not yet checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomatonDef {
    pub signature: Signature,
    pub states: Vec<String>,
    pub final_states: Vec<String>,
    pub rules: Vec<Rule>,
}

impl AutomatonDef {
    /// Checks every invariant of a complete deterministic automaton and
    /// compiles it into transition tables.
    pub fn validate(&self) -> Result<Automaton, AutomatonError> {
        let mut state_ids = HashMap::new();
        for (i, q) in self.states.iter().enumerate() {
            if state_ids.insert(q.as_str(), StateId(i as u32)).is_some() {
                return Err(AutomatonError::DuplicateState(q.clone()));
            }
        }
        let state = |name: &str| {
            state_ids
                .get(name)
                .copied()
                .ok_or_else(|| AutomatonError::UnknownState(name.to_string()))
        };
        let mut is_final = vec![false; self.states.len()];
        for q in &self.final_states {
            is_final[state(q)?.index()] = true;
        }

        let sig = &self.signature;
        let n = self.states.len();
        let mut leaf: Vec<Option<StateId>> = vec![None; sig.num_constants()];
        let mut tables: Vec<Vec<Option<StateId>>> = sig
            .operators()
            .map(|op| vec![None; table_len(n, sig.arity(op))])
            .collect();
        for rule in &self.rules {
            let symbol = sig
                .lookup(&rule.symbol)
                .ok_or_else(|| AutomatonError::UnknownSymbol(rule.symbol.clone()))?;
            let expected = match symbol {
                Symbol::Const(_) => 0,
                Symbol::Op(op) => sig.arity(op),
            };
            if rule.args.len() != expected {
                return Err(AutomatonError::ArityMismatch {
                    symbol: rule.symbol.clone(),
                    expected,
                    found: rule.args.len(),
                });
            }
            let target = state(&rule.target)?;
            let slot = match symbol {
                Symbol::Const(c) => &mut leaf[c.index()],
                Symbol::Op(op) => {
                    let args = rule
                        .args
                        .iter()
                        .map(|a| state(a))
                        .collect::<Result<Vec<_>, _>>()?;
                    &mut tables[op.index()][table_index(n, &args)]
                }
            };
            if slot.replace(target).is_some() {
                return Err(AutomatonError::DuplicateRule(rule.lhs()));
            }
        }

        let missing = self.missing_transitions_in(&leaf, &tables);
        if !missing.is_empty() {
            return Err(AutomatonError::IncompleteDelta(missing));
        }
        Ok(Automaton {
            signature: sig.clone(),
            states: self.states.clone(),
            is_final,
            leaf: leaf.into_iter().map(Option::unwrap).collect(),
            tables: tables
                .into_iter()
                .map(|t| t.into_iter().map(Option::unwrap).collect())
                .collect(),
        })
    }

    fn missing_transitions_in(
        &self,
        leaf: &[Option<StateId>],
        tables: &[Vec<Option<StateId>>],
    ) -> Vec<MissingTransition> {
        let sig = &self.signature;
        let mut missing: Vec<MissingTransition> = sig
            .constants()
            .filter(|c| leaf[c.index()].is_none())
            .map(|c| MissingTransition {
                symbol: sig.const_name(c).to_string(),
                states: Vec::new(),
            })
            .collect();
        for op in sig.operators() {
            for (i, slot) in tables[op.index()].iter().enumerate() {
                if slot.is_none() {
                    missing.push(MissingTransition {
                        symbol: sig.op_name(op).to_string(),
                        states: decode_tuple(self.states.len(), sig.arity(op), i)
                            .into_iter()
                            .map(|q| self.states[q.index()].clone())
                            .collect(),
                    });
                }
            }
        }
        missing
    }

    /// Adds a fresh non-final sink state and routes every undefined
    /// transition to it. Returns the sink's name, or `None` when nothing was
    /// missing.
    ///
    /// Rules that mention undeclared symbols or states are left alone so that
    /// `validate` still reports them.
    pub fn complete_with_sink(&mut self) -> Option<String> {
        let defined: HashSet<(String, Vec<String>)> = self
            .rules
            .iter()
            .map(|r| (r.symbol.clone(), r.args.clone()))
            .collect();
        let taken: HashSet<&str> = self.states.iter().map(String::as_str).collect();
        let sink = std::iter::once("sink".to_string())
            .chain((1..).map(|i| format!("sink{i}")))
            .find(|s| !taken.contains(s.as_str()))
            .expect("unbounded name supply");

        let mut states = self.states.clone();
        states.push(sink.clone());
        let sig = &self.signature;
        let mut added = Vec::new();
        for c in sig.constants() {
            let key = (sig.const_name(c).to_string(), Vec::new());
            if !defined.contains(&key) {
                added.push(Rule {
                    symbol: key.0,
                    args: key.1,
                    target: sink.clone(),
                });
            }
        }
        let mut any_missing = !added.is_empty();
        for op in sig.operators() {
            let arity = sig.arity(op);
            for i in 0..table_len(states.len(), arity) {
                let args: Vec<String> = decode_tuple(states.len(), arity, i)
                    .into_iter()
                    .map(|q| states[q.index()].clone())
                    .collect();
                let key = (sig.op_name(op).to_string(), args);
                if !defined.contains(&key) {
                    any_missing |= !key.1.contains(&sink);
                    added.push(Rule {
                        symbol: key.0,
                        args: key.1,
                        target: sink.clone(),
                    });
                }
            }
        }
        if !any_missing {
            return None;
        }
        self.states = states;
        self.rules.extend(added);
        Some(sink)
    }
}

fn table_len(states: usize, arity: usize) -> usize {
    states.pow(arity as u32)
}

/// Row of `(q₁,…,qₙ)` in a table where `q₁` is the most significant digit.
fn table_index(states: usize, args: &[StateId]) -> usize {
    args.iter().fold(0, |acc, q| acc * states + q.index())
}

fn decode_tuple(states: usize, arity: usize, mut index: usize) -> Vec<StateId> {
    let mut out = vec![StateId(0); arity];
    for slot in out.iter_mut().rev() {
        *slot = StateId((index % states) as u32);
        index /= states;
    }
    out
}

/// A complete deterministic bottom-up tree automaton `⟨Q, F, Q_f, Δ⟩`.
///
/// Only obtainable through [`AutomatonDef::validate`], so every transition
/// is defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    signature: Signature,
    states: Vec<String>,
    is_final: Vec<bool>,
    leaf: Vec<StateId>,
    tables: Vec<Box<[StateId]>>,
}

/// Outcome of an acceptance check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Acceptance {
    pub accepted: bool,
    /// The first accepting assignment in enumeration order.
    pub witness: Option<Assignment>,
}

impl Automaton {
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = StateId> {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.index()]
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| StateId(i as u32))
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.is_final[q.index()]
    }

    pub fn final_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states().filter(|q| self.is_final(*q))
    }

    /// `Δ₀(c)`.
    pub fn leaf_state(&self, c: ConstId) -> StateId {
        self.leaf[c.index()]
    }

    /// `Δₙ(op, q₁,…,qₙ)`.
    pub fn transition(&self, op: OpId, args: &[StateId]) -> StateId {
        debug_assert_eq!(args.len(), self.signature.arity(op));
        self.tables[op.index()][table_index(self.states.len(), args)]
    }

    /// `A(γ, t)`: the state reached bottom-up when every variable `x` is read
    /// as the constant `γ(x)`.
    pub fn run(&self, t: &Term, gamma: &Assignment) -> Result<StateId, RunError> {
        match t.view() {
            View::Var(x) => gamma
                .get(x)
                .map(|c| self.leaf_state(c))
                .ok_or(RunError::UnboundVariable(x)),
            View::Const(c) => Ok(self.leaf_state(c)),
            View::Apply(op, children) => {
                let states = children
                    .iter()
                    .map(|c| self.run(c, gamma))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(self.transition(op, &states))
            }
        }
    }

    /// Whether some assignment over `Var(t)` drives the run into a final
    /// state. Assignments are tried in lexicographic order, so the witness is
    /// the first accepting one. Ground terms never hit the cap.
    pub fn accepts(&self, t: &Term, cap: u64) -> Result<Acceptance, CapExceeded> {
        let vars: Vec<Var> = t.variables().into_iter().collect();
        if !vars.is_empty() {
            check_cap(self.signature.num_constants(), vars.len(), cap)?;
        }
        let constants: Vec<ConstId> = self.signature.constants().collect();
        let witness = enumerate_assignments(&constants, &vars).find(|gamma| {
            let q = self.run(t, gamma).expect("assignment covers Var(t)");
            self.is_final(q)
        });
        Ok(Acceptance {
            accepted: witness.is_some(),
            witness,
        })
    }

    /// The named form of this automaton, with rules in canonical order.
    pub fn to_def(&self) -> AutomatonDef {
        let sig = &self.signature;
        let mut rules: Vec<Rule> = sig
            .constants()
            .map(|c| Rule {
                symbol: sig.const_name(c).to_string(),
                args: Vec::new(),
                target: self.state_name(self.leaf_state(c)).to_string(),
            })
            .collect();
        for op in sig.operators() {
            let arity = sig.arity(op);
            for (i, q) in self.tables[op.index()].iter().enumerate() {
                rules.push(Rule {
                    symbol: sig.op_name(op).to_string(),
                    args: decode_tuple(self.states.len(), arity, i)
                        .into_iter()
                        .map(|a| self.state_name(a).to_string())
                        .collect(),
                    target: self.state_name(*q).to_string(),
                });
            }
        }
        AutomatonDef {
            signature: sig.clone(),
            states: self.states.clone(),
            final_states: self
                .final_states()
                .map(|q| self.state_name(q).to_string())
                .collect(),
            rules,
        }
    }
}
