use std::collections::BTreeMap;

use crate::automaton::Automaton;
use crate::terms::{ConstId, Term, Var};

use super::essential::essential_inputs;
use super::AnalysisError;

/// For each variable of the reference set, the first constant (in
/// declaration order) that keeps the rest of the set essential, or `None`.
pub type StrongWitnesses = BTreeMap<Var, Option<ConstId>>;

/// Strongly essential inputs of `t` with respect to `reference`, which
/// defaults to `Ess(t, A)`.
///
/// `x ∈ M` is strongly essential when some constant `c` satisfies
/// `M \ {x} ⊆ Ess(t(x ← c), A)`.
pub fn strongly_essential(
    a: &Automaton,
    t: &Term,
    reference: Option<&[Var]>,
    cap: u64,
) -> Result<StrongWitnesses, AnalysisError> {
    let ess = essential_inputs(a, t, cap)?;
    let m: Vec<Var> = match reference {
        None => ess.clone(),
        Some(m) => {
            let mut m = m.to_vec();
            m.sort();
            m.dedup();
            let outside: Vec<Var> = m.iter().copied().filter(|x| !ess.contains(x)).collect();
            if !outside.is_empty() {
                return Err(AnalysisError::NotASubset(outside));
            }
            m
        }
    };
    if m.is_empty() {
        return Err(AnalysisError::EmptyReferenceSet);
    }
    let mut out = StrongWitnesses::new();
    for &x in &m {
        let mut witness = None;
        for c in a.signature().constants() {
            let fixed = t.substitute_one(x, &Term::constant(c));
            let ess_fixed = essential_inputs(a, &fixed, cap)?;
            if m.iter().filter(|&&y| y != x).all(|y| ess_fixed.contains(y)) {
                witness = Some(c);
                break;
            }
        }
        out.insert(x, witness);
    }
    Ok(out)
}

/// Result of checking that a tree with at least two essential inputs has
/// one (and, empirically, two) strongly essential inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem2Report {
    pub essential: Vec<Var>,
    /// `None` when fewer than two inputs are essential.
    pub witnesses: Option<StrongWitnesses>,
}

impl Theorem2Report {
    pub fn applicable(&self) -> bool {
        self.witnesses.is_some()
    }

    pub fn strongly_essential(&self) -> Vec<Var> {
        self.witnesses
            .iter()
            .flatten()
            .filter(|(_, w)| w.is_some())
            .map(|(x, _)| *x)
            .collect()
    }

    pub fn theorem2_holds(&self) -> Option<bool> {
        self.applicable()
            .then(|| !self.strongly_essential().is_empty())
    }

    pub fn corollary1_holds(&self) -> Option<bool> {
        self.applicable()
            .then(|| self.strongly_essential().len() >= 2)
    }
}

pub fn check_theorem2(a: &Automaton, t: &Term, cap: u64) -> Result<Theorem2Report, AnalysisError> {
    let essential = essential_inputs(a, t, cap)?;
    let witnesses = if essential.len() >= 2 {
        Some(strongly_essential(a, t, None, cap)?)
    } else {
        None
    };
    Ok(Theorem2Report {
        essential,
        witnesses,
    })
}
