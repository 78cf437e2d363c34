use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::automaton::{
    check_cap, enumerate_assignments, Assignment, Automaton, CapExceeded, StateId,
};
use crate::terms::{ConstId, Term, Var, View};

/// The tabulated map `γ ↦ A(γ, t)` over every assignment of `Var(t)`.
///
/// Rows are stored in lexicographic assignment order: the first variable is
/// the most significant digit and digit `d` stands for the `d`-th declared
/// constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateFunction {
    vars: Vec<Var>,
    radix: usize,
    table: Vec<StateId>,
}

impl StateFunction {
    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn table(&self) -> &[StateId] {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Value at `γ`. Extra bindings in `γ` are ignored; `None` if `γ` misses
    /// one of the variables.
    pub fn value(&self, gamma: &Assignment) -> Option<StateId> {
        let mut index = 0;
        for x in &self.vars {
            index = index * self.radix + gamma.get(*x)?.index();
        }
        Some(self.table[index])
    }

    pub fn entries(&self) -> impl Iterator<Item = (Assignment, StateId)> + '_ {
        let constants: Vec<ConstId> = (0..self.radix as u32).map(ConstId).collect();
        enumerate_assignments(&constants, &self.vars).zip(self.table.iter().copied())
    }

    pub fn is_constant(&self) -> bool {
        self.table.windows(2).all(|w| w[0] == w[1])
    }

    fn stride(&self, axis: usize) -> usize {
        self.radix.pow((self.vars.len() - axis - 1) as u32)
    }

    /// Whether the table varies along the axis of `x` with every other
    /// coordinate held fixed.
    pub fn is_essential(&self, x: Var) -> bool {
        let Some(axis) = self.vars.iter().position(|v| *v == x) else {
            return false;
        };
        let stride = self.stride(axis);
        let block = stride * self.radix;
        (0..self.table.len()).step_by(block).any(|start| {
            (start..start + stride).any(|base| {
                let first = self.table[base];
                (1..self.radix).any(|d| self.table[base + d * stride] != first)
            })
        })
    }

    /// `Ess` read off the table, ascending.
    pub fn essential_vars(&self) -> Vec<Var> {
        self.vars
            .iter()
            .copied()
            .filter(|x| self.is_essential(*x))
            .collect()
    }

    /// The same function viewed over a superset of its variables.
    pub fn lift(&self, vars: &[Var]) -> StateFunction {
        let map = projection(vars, &self.vars, self.radix);
        let table = odometer(vars.len(), self.radix)
            .map(|digits| self.table[project(&digits, &map)])
            .collect();
        StateFunction {
            vars: vars.to_vec(),
            radix: self.radix,
            table,
        }
    }

    /// Pointwise equality over the union of both variable sets.
    pub fn same_function(&self, other: &StateFunction) -> bool {
        if self.vars == other.vars {
            return self.table == other.table;
        }
        let union: Vec<Var> = self
            .vars
            .iter()
            .chain(&other.vars)
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        self.lift(&union).table == other.lift(&union).table
    }
}

/// For each variable of `sub` (⊆ `vars`), its axis in `vars` and its
/// stride in `sub`'s table.
fn projection(vars: &[Var], sub: &[Var], radix: usize) -> Vec<(usize, usize)> {
    sub.iter()
        .enumerate()
        .map(|(i, x)| {
            let axis = vars
                .iter()
                .position(|v| v == x)
                .expect("projection target must be a subset");
            (axis, radix.pow((sub.len() - i - 1) as u32))
        })
        .collect()
}

fn project(digits: &[usize], map: &[(usize, usize)]) -> usize {
    map.iter()
        .map(|&(axis, stride)| digits[axis] * stride)
        .sum()
}

/// All digit vectors of length `n` over `radix`, last digit fastest.
fn odometer(n: usize, radix: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = Some(vec![0; n]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        for d in succ.iter_mut().rev() {
            *d += 1;
            if *d < radix {
                next = Some(succ);
                return Some(current);
            }
            *d = 0;
        }
        Some(current)
    })
}

/// Bottom-up tabulation with structurally shared subterms computed once.
pub(crate) struct Tabulator<'a> {
    automaton: &'a Automaton,
    memo: HashMap<&'a Term, Rc<StateFunction>>,
}

impl<'a> Tabulator<'a> {
    pub(crate) fn new(automaton: &'a Automaton) -> Self {
        Tabulator {
            automaton,
            memo: HashMap::new(),
        }
    }

    /// The caller is responsible for checking the cap on the largest term.
    pub(crate) fn table(&mut self, t: &'a Term) -> Rc<StateFunction> {
        if let Some(f) = self.memo.get(t) {
            return Rc::clone(f);
        }
        let radix = self.automaton.signature().num_constants();
        let f = match t.view() {
            View::Var(x) => StateFunction {
                vars: vec![x],
                radix,
                table: self
                    .automaton
                    .signature()
                    .constants()
                    .map(|c| self.automaton.leaf_state(c))
                    .collect(),
            },
            View::Const(c) => StateFunction {
                vars: Vec::new(),
                radix,
                table: vec![self.automaton.leaf_state(c)],
            },
            View::Apply(op, children) => {
                let tables: Vec<Rc<StateFunction>> =
                    children.iter().map(|c| self.table(c)).collect();
                let vars: Vec<Var> = tables
                    .iter()
                    .flat_map(|f| f.vars.iter().copied())
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                let maps: Vec<Vec<(usize, usize)>> = tables
                    .iter()
                    .map(|f| projection(&vars, &f.vars, radix))
                    .collect();
                let mut args = vec![StateId(0); tables.len()];
                let table = odometer(vars.len(), radix)
                    .map(|digits| {
                        for ((slot, f), map) in args.iter_mut().zip(&tables).zip(&maps) {
                            *slot = f.table[project(&digits, map)];
                        }
                        self.automaton.transition(op, &args)
                    })
                    .collect();
                StateFunction { vars, radix, table }
            }
        };
        let f = Rc::new(f);
        self.memo.insert(t, Rc::clone(&f));
        f
    }
}

/// Tabulates `γ ↦ A(γ, t)` for every `γ ∈ Ass(Var(t), F₀)`.
pub fn state_function(a: &Automaton, t: &Term, cap: u64) -> Result<StateFunction, CapExceeded> {
    check_cap(a.signature().num_constants(), t.variables().len(), cap)?;
    let f = Tabulator::new(a).table(t);
    Ok(Rc::try_unwrap(f).unwrap_or_else(|f| (*f).clone()))
}

/// Whether `A(γ, t) = A(γ, u)` for every assignment of
/// `Var(t) ∪ Var(u)`.
pub fn equivalent(a: &Automaton, t: &Term, u: &Term, cap: u64) -> Result<bool, CapExceeded> {
    let union = t.variables().union(&u.variables()).count();
    check_cap(a.signature().num_constants(), union, cap)?;
    let mut tab = Tabulator::new(a);
    let (ft, fu) = (tab.table(t), tab.table(u));
    Ok(ft.same_function(&fu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::tests::example1;
    use crate::automaton::DEFAULT_CAP;
    use crate::terms::parse_term;

    fn term(a: &Automaton, s: &str) -> Term {
        parse_term(a.signature(), s).unwrap()
    }

    /// Runs every assignment directly; independent of the tabulation.
    fn brute_force(a: &Automaton, t: &Term) -> Vec<StateId> {
        let consts: Vec<ConstId> = a.signature().constants().collect();
        let vars: Vec<Var> = t.variables().into_iter().collect();
        enumerate_assignments(&consts, &vars)
            .map(|g| a.run(t, &g).unwrap())
            .collect()
    }

    #[test]
    fn example_tree_table_matches_runs() {
        let a = example1();
        let t = term(&a, "g2(g1(f1(x2),x1),x1)");
        let f = state_function(&a, &t, DEFAULT_CAP).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.table(), brute_force(&a, &t).as_slice());
        let x1 = Var::new(1).unwrap();
        for (gamma, q) in f.entries() {
            assert_eq!(q, a.leaf_state(gamma.get(x1).unwrap()));
        }
    }

    #[test]
    fn ground_and_variable_tables() {
        let a = example1();
        let f = state_function(&a, &term(&a, "f1(0)"), DEFAULT_CAP).unwrap();
        assert_eq!(f.table(), &[a.state("q1").unwrap()]);
        let f = state_function(&a, &term(&a, "x1"), DEFAULT_CAP).unwrap();
        assert_eq!(f.table(), &[a.state("q0").unwrap(), a.state("q1").unwrap()]);
    }

    #[test]
    fn shared_subterms_and_cap() {
        let a = example1();
        let t = term(&a, "g1(g2(x1,x3),g2(x1,x3))");
        let f = state_function(&a, &t, DEFAULT_CAP).unwrap();
        assert_eq!(f.table(), brute_force(&a, &t).as_slice());
        assert_eq!(
            state_function(&a, &t, 3).unwrap_err(),
            CapExceeded {
                constants: 2,
                variables: 2,
                cap: 3
            }
        );
    }

    #[test]
    fn equivalence_examples() {
        let a = example1();
        assert!(equivalent(&a, &term(&a, "f1(0)"), &term(&a, "1"), DEFAULT_CAP).unwrap());
        let t = term(&a, "g2(g1(f1(x2),x1),x1)");
        assert!(equivalent(&a, &t, &t, DEFAULT_CAP).unwrap());
        assert!(!equivalent(&a, &term(&a, "x1"), &term(&a, "x2"), DEFAULT_CAP).unwrap());
        assert!(equivalent(&a, &t, &term(&a, "x1"), DEFAULT_CAP).unwrap());
    }

    #[test]
    fn lift_preserves_values() {
        let a = example1();
        let f = state_function(&a, &term(&a, "f1(x2)"), DEFAULT_CAP).unwrap();
        let vars = [
            Var::new(1).unwrap(),
            Var::new(2).unwrap(),
            Var::new(3).unwrap(),
        ];
        let lifted = f.lift(&vars);
        assert_eq!(lifted.len(), 8);
        for (gamma, q) in lifted.entries() {
            assert_eq!(Some(q), f.value(&gamma));
        }
    }
}
