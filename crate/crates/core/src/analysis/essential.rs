use crate::automaton::{check_cap, enumerate_assignments, Assignment, Automaton, CapExceeded};
use crate::terms::{ConstId, Term, Var};

use super::state_function::state_function;

/// Essential and fictive inputs of a term, both ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Essentiality {
    pub essential: Vec<Var>,
    pub fictive: Vec<Var>,
}

/// `Ess(t, A)`, read off the state function: `x` is essential iff the table
/// is not constant along the `x` axis with the other coordinates fixed.
pub fn essential_inputs(a: &Automaton, t: &Term, cap: u64) -> Result<Vec<Var>, CapExceeded> {
    Ok(state_function(a, t, cap)?.essential_vars())
}

/// `Ess(t, A)` computed literally: scan every assignment `γ₁`, change the
/// value of one variable to obtain `γ₂`, and run the automaton on both.
///
/// Shares nothing with the tabulated route besides [`Automaton::run`], which
/// is what makes it usable as an oracle for [`essential_inputs`].
pub fn essential_inputs_by_pairs(
    a: &Automaton,
    t: &Term,
    cap: u64,
) -> Result<Vec<Var>, CapExceeded> {
    let vars: Vec<Var> = t.variables().into_iter().collect();
    check_cap(a.signature().num_constants(), vars.len(), cap)?;
    let constants: Vec<ConstId> = a.signature().constants().collect();
    let run = |g: &Assignment| a.run(t, g).expect("assignment covers Var(t)");
    Ok(vars
        .iter()
        .copied()
        .filter(|&x| {
            enumerate_assignments(&constants, &vars).any(|g1| {
                let q1 = run(&g1);
                constants
                    .iter()
                    .filter(|&&c| Some(c) != g1.get(x))
                    .any(|&c| run(&g1.with(x, c)) != q1)
            })
        })
        .collect())
}

/// Splits `Var(t)` into essential and fictive inputs.
pub fn classify(a: &Automaton, t: &Term, cap: u64) -> Result<Essentiality, CapExceeded> {
    let essential = essential_inputs(a, t, cap)?;
    let fictive = t
        .variables()
        .into_iter()
        .filter(|x| !essential.contains(x))
        .collect();
    Ok(Essentiality { essential, fictive })
}
