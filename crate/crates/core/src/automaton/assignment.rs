use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::terms::{parse_variable, ConstId, Signature, Var};

/// Default bound on the number of assignments one exhaustive analysis may
/// enumerate.
pub const DEFAULT_CAP: u64 = 1 << 20;

/// Raised when `|F₀|^|Y|` assignments would have to be enumerated and that
/// number exceeds the configured cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("complexity cap exceeded: {constants}^{variables} assignments needed, cap is {cap}")]
pub struct CapExceeded {
    pub constants: usize,
    pub variables: usize,
    pub cap: u64,
}

/// `constants^variables`, or `None` on overflow.
pub fn assignment_count(constants: usize, variables: usize) -> Option<u64> {
    (constants as u64).checked_pow(u32::try_from(variables).ok()?)
}

pub fn check_cap(constants: usize, variables: usize, cap: u64) -> Result<u64, CapExceeded> {
    assignment_count(constants, variables)
        .filter(|&n| n <= cap)
        .ok_or(CapExceeded {
            constants,
            variables,
            cap,
        })
}

/// A total map from a finite set of variables to constants.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment(BTreeMap<Var, ConstId>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentParseError {
    #[error("malformed binding `{0}`, expected x<i>=<constant>")]
    Malformed(String),
    #[error("`{0}` is not a variable")]
    NotAVariable(String),
    #[error("`{0}` is not a declared constant")]
    UnknownConstant(String),
    #[error("variable {0} is bound twice")]
    Duplicate(Var),
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn get(&self, x: Var) -> Option<ConstId> {
        self.0.get(&x).copied()
    }

    pub fn insert(&mut self, x: Var, c: ConstId) -> Option<ConstId> {
        self.0.insert(x, c)
    }

    /// `γ[x ↦ c]`.
    pub fn with(&self, x: Var, c: ConstId) -> Assignment {
        let mut out = self.clone();
        out.insert(x, c);
        out
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, ConstId)> + '_ {
        self.0.iter().map(|(v, c)| (*v, *c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses `x1=0,x2=1`. The empty string is the empty assignment.
    pub fn parse(sig: &Signature, s: &str) -> Result<Assignment, AssignmentParseError> {
        let mut out = Assignment::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (lhs, rhs) = part
                .split_once('=')
                .ok_or_else(|| AssignmentParseError::Malformed(part.to_string()))?;
            let (lhs, rhs) = (lhs.trim(), rhs.trim());
            let x = parse_variable(lhs)
                .ok_or_else(|| AssignmentParseError::NotAVariable(lhs.to_string()))?;
            let c = sig
                .constant(rhs)
                .ok_or_else(|| AssignmentParseError::UnknownConstant(rhs.to_string()))?;
            if out.insert(x, c).is_some() {
                return Err(AssignmentParseError::Duplicate(x));
            }
        }
        Ok(out)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        AssignmentDisplay {
            sig,
            assignment: self,
        }
    }
}

impl FromIterator<(Var, ConstId)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, ConstId)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

struct AssignmentDisplay<'a> {
    sig: &'a Signature,
    assignment: &'a Assignment,
}

impl fmt::Display for AssignmentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, c)) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}={}", self.sig.const_name(c))?;
        }
        Ok(())
    }
}

/// Iterator over `Ass(Y, F₀)` in lexicographic order: the first variable is
/// the most significant coordinate, constants vary in the given order.
#[derive(Clone, Debug)]
pub struct Assignments {
    constants: Vec<ConstId>,
    vars: Vec<Var>,
    digits: Vec<usize>,
    done: bool,
}

pub fn enumerate_assignments(constants: &[ConstId], vars: &[Var]) -> Assignments {
    Assignments {
        constants: constants.to_vec(),
        vars: vars.to_vec(),
        digits: vec![0; vars.len()],
        done: constants.is_empty() && !vars.is_empty(),
    }
}

impl Iterator for Assignments {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.done {
            return None;
        }
        let out = self
            .vars
            .iter()
            .zip(&self.digits)
            .map(|(&x, &d)| (x, self.constants[d]))
            .collect();
        // odometer, last variable fastest
        self.done = true;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.constants.len() {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::from_names(&["0", "1"], &[("f1", 1)]).unwrap()
    }

    fn x(i: u32) -> Var {
        Var::new(i).unwrap()
    }

    #[test]
    fn enumerates_four_assignments_in_order() {
        let s = sig();
        let consts: Vec<ConstId> = s.constants().collect();
        let all: Vec<String> = enumerate_assignments(&consts, &[x(1), x(2)])
            .map(|a| a.display(&s).to_string())
            .collect();
        assert_eq!(all, ["x1=0,x2=0", "x1=0,x2=1", "x1=1,x2=0", "x1=1,x2=1"]);
    }

    #[test]
    fn empty_variable_set_yields_one_assignment() {
        let s = sig();
        let consts: Vec<ConstId> = s.constants().collect();
        let all: Vec<Assignment> = enumerate_assignments(&consts, &[]).collect();
        assert_eq!(all, vec![Assignment::new()]);
    }

    #[test]
    fn single_constant() {
        let s = Signature::from_names(&["a"], &[]).unwrap();
        let consts: Vec<ConstId> = s.constants().collect();
        let all: Vec<String> = enumerate_assignments(&consts, &[x(1)])
            .map(|a| a.display(&s).to_string())
            .collect();
        assert_eq!(all, ["x1=a"]);
    }

    #[test]
    fn parse_assignments() {
        let s = sig();
        let a = Assignment::parse(&s, "x1=1, x2=0").unwrap();
        assert_eq!(a.display(&s).to_string(), "x1=1,x2=0");
        assert!(Assignment::parse(&s, "").unwrap().is_empty());
        assert_eq!(
            Assignment::parse(&s, "x1=2").unwrap_err(),
            AssignmentParseError::UnknownConstant("2".into())
        );
        assert_eq!(
            Assignment::parse(&s, "x1=0,x1=1").unwrap_err(),
            AssignmentParseError::Duplicate(x(1))
        );
        assert!(matches!(
            Assignment::parse(&s, "y=0"),
            Err(AssignmentParseError::NotAVariable(_))
        ));
        assert!(matches!(
            Assignment::parse(&s, "x1"),
            Err(AssignmentParseError::Malformed(_))
        ));
    }

    #[test]
    fn cap_arithmetic() {
        assert_eq!(check_cap(2, 20, DEFAULT_CAP), Ok(1 << 20));
        assert!(check_cap(2, 21, DEFAULT_CAP).is_err());
        assert!(check_cap(3, 200, u64::MAX).is_err());
        assert_eq!(check_cap(5, 0, 1), Ok(1));
    }
}
