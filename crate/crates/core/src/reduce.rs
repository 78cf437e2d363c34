//! Tree minimization with respect to an automaton.
//!
//! Two operations shrink a tree without changing its run under any
//! assignment:
//!
//! * fictive-input removal: a variable the run does not depend on is replaced
//!   everywhere by the first declared constant;
//! * subtree replacement: if `t₁` is a proper subterm of `t₂` and both have
//!   the same state function, `t₂` is replaced by `t₁`.
//!
//! [`minimize`] applies them one at a time until neither applies.

use std::fmt;

use crate::analysis::{classify, Tabulator};
use crate::automaton::{check_cap, Automaton, CapExceeded};
use crate::genrand::SplitMix64;
use crate::terms::{ConstId, Position, Signature, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    FictiveRemoval {
        variable: Var,
        constant: ConstId,
    },
    /// `target` is the position of `t₂` in the tree, `source` the position
    /// of `t₁` relative to `t₂`.
    SubtreeReplacement {
        target: Position,
        source: Position,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub before: Term,
    pub after: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub initial: Term,
    pub steps: Vec<ReductionStep>,
    pub final_term: Term,
}

/// Order in which reduction candidates are scanned.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScanOrder {
    /// Lowest fictive variable first; replacement targets outermost first,
    /// sources shortest first, the whole tree as target last.
    #[default]
    Canonical,
    /// Candidates shuffled with the given seed, for confluence experiments.
    Shuffled(u64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReduceOptions {
    /// Never replace the whole tree; only `t₁ ⊲ t₂ ⊲ t`.
    pub strict_subterm: bool,
    pub order: ScanOrder,
}

/// Replaces the lowest-indexed fictive variable by the first declared
/// constant, if there is a fictive variable.
pub fn find_fictive_removal(
    a: &Automaton,
    t: &Term,
    cap: u64,
) -> Result<Option<ReductionStep>, CapExceeded> {
    fictive_removal(a, t, cap, None)
}

fn fictive_removal(
    a: &Automaton,
    t: &Term,
    cap: u64,
    rng: Option<&mut SplitMix64>,
) -> Result<Option<ReductionStep>, CapExceeded> {
    let fictive = classify(a, t, cap)?.fictive;
    let variable = match rng {
        None => fictive.first().copied(),
        Some(_) if fictive.is_empty() => None,
        Some(rng) => Some(fictive[rng.below(fictive.len() as u64) as usize]),
    };
    let Some(variable) = variable else {
        return Ok(None);
    };
    let constant = a
        .signature()
        .constants()
        .next()
        .expect("signatures have a constant");
    let after = t.substitute_one(variable, &Term::constant(constant));
    Ok(Some(ReductionStep {
        kind: StepKind::FictiveRemoval { variable, constant },
        before: t.clone(),
        after,
    }))
}

/// Finds the first pair `t₁ ⊲ t₂ ⊴ t` with equal state functions and
/// replaces `t₂` by `t₁`.
///
/// Targets `t₂` are scanned in length-lexicographic order of their
/// positions, then sources `t₁` below each target in the same order. The
/// whole tree is tried as a target only after every proper subtree, and not
/// at all when `strict_subterm` is set.
pub fn find_subtree_replacement(
    a: &Automaton,
    t: &Term,
    strict_subterm: bool,
    cap: u64,
) -> Result<Option<ReductionStep>, CapExceeded> {
    subtree_replacement(a, t, strict_subterm, cap, None)
}

fn subtree_replacement(
    a: &Automaton,
    t: &Term,
    strict_subterm: bool,
    cap: u64,
    rng: Option<&mut SplitMix64>,
) -> Result<Option<ReductionStep>, CapExceeded> {
    check_cap(a.signature().num_constants(), t.variables().len(), cap)?;
    let positions = t.positions();
    let mut candidates: Vec<(&Position, &Position)> = Vec::new();
    let targets = positions[1..]
        .iter()
        .chain((!strict_subterm).then(|| &positions[0]));
    for target in targets {
        candidates.extend(
            positions
                .iter()
                .filter(|q| q.len() > target.len() && target.is_prefix_of(q))
                .map(|q| (target, q)),
        );
    }
    if let Some(rng) = rng {
        rng.shuffle(&mut candidates);
    }

    let mut tab = Tabulator::new(a);
    for (target, source) in candidates {
        let t2 = t.subterm(target).expect("position of t");
        let t1 = t.subterm(source).expect("position of t");
        if tab.table(t1).same_function(&tab.table(t2)) {
            let after = t.replace_at(target, t1.clone()).expect("position of t");
            return Ok(Some(ReductionStep {
                kind: StepKind::SubtreeReplacement {
                    target: target.clone(),
                    source: source
                        .strip_prefix(target)
                        .expect("source lies below target"),
                },
                before: t.clone(),
                after,
            }));
        }
    }
    Ok(None)
}

/// Applies reductions until none applies, fictive removals first.
///
/// Every step strictly decreases `(|Var(t)|, size(t))` lexicographically, so
/// the loop terminates after at most `|Var(t)| + size(t)` steps.
pub fn minimize(
    a: &Automaton,
    t: &Term,
    options: &ReduceOptions,
    cap: u64,
) -> Result<ReductionTrace, CapExceeded> {
    let mut rng = match options.order {
        ScanOrder::Canonical => None,
        ScanOrder::Shuffled(seed) => Some(SplitMix64::new(seed)),
    };
    let mut current = t.clone();
    let mut steps = Vec::new();
    loop {
        let step = match fictive_removal(a, &current, cap, rng.as_mut())? {
            Some(step) => Some(step),
            None => subtree_replacement(a, &current, options.strict_subterm, cap, rng.as_mut())?,
        };
        let Some(step) = step else { break };
        current = step.after.clone();
        steps.push(step);
    }
    Ok(ReductionTrace {
        initial: t.clone(),
        steps,
        final_term: current,
    })
}

/// True when no reduction of either kind applies.
pub fn is_minimal(
    a: &Automaton,
    t: &Term,
    strict_subterm: bool,
    cap: u64,
) -> Result<bool, CapExceeded> {
    Ok(find_fictive_removal(a, t, cap)?.is_none()
        && find_subtree_replacement(a, t, strict_subterm, cap)?.is_none())
}

impl ReductionStep {
    pub fn display<'a>(&'a self, sig: &'a Signature, number: usize) -> impl fmt::Display + 'a {
        StepDisplay {
            sig,
            step: self,
            number,
        }
    }
}

struct StepDisplay<'a> {
    sig: &'a Signature,
    step: &'a ReductionStep,
    number: usize,
}

impl fmt::Display for StepDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.step.kind {
            StepKind::FictiveRemoval { variable, constant } => write!(
                f,
                "STEP {} FICTIVE {variable} := {}",
                self.number,
                self.sig.const_name(*constant)
            )?,
            StepKind::SubtreeReplacement { target, source } => write!(
                f,
                "STEP {} REPLACE at {target} with subterm at {}",
                self.number,
                target.concat(source)
            )?,
        }
        write!(f, "\n{}", self.step.after.display(self.sig))
    }
}

impl ReductionTrace {
    /// One `STEP` line per step, each followed by the tree after the step.
    pub fn to_text(&self, sig: &Signature) -> String {
        self.steps
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{}\n", s.display(sig, i + 1)))
            .collect()
    }
}
