use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A node address: the sequence of 1-based child indices from the root.
///
/// The root is the empty sequence, printed as `ε`. Positions whose steps are
/// all single digits print as a digit string (`111`); otherwise the steps are
/// dot separated (`1.12.3`).
///
/// `Ord` is length-lexicographic: shorter positions first, ties broken
/// lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Position(Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not a position")]
pub struct PositionParseError(pub String);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    /// Builds a position from 1-based child indices. Returns `None` if any
    /// index is zero.
    pub fn from_steps(steps: impl IntoIterator<Item = u32>) -> Option<Position> {
        let steps: Vec<u32> = steps.into_iter().collect();
        steps.iter().all(|&s| s >= 1).then_some(Position(steps))
    }

    pub fn steps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// Same as [`Position::is_root`].
    pub fn is_empty(&self) -> bool {
        self.is_root()
    }

    /// `self · i` for a 1-based child index.
    pub fn child(&self, i: u32) -> Position {
        debug_assert!(i >= 1);
        let mut steps = self.0.clone();
        steps.push(i);
        Position(steps)
    }

    pub fn parent(&self) -> Option<Position> {
        let (_, init) = self.0.split_last()?;
        Some(Position(init.to_vec()))
    }

    /// `self · other`.
    pub fn concat(&self, other: &Position) -> Position {
        let mut steps = self.0.clone();
        steps.extend_from_slice(&other.0);
        Position(steps)
    }

    /// Prefix order: `self ≼ other`.
    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    /// If `self = prefix · rest`, returns `rest`.
    pub fn strip_prefix(&self, prefix: &Position) -> Option<Position> {
        self.0
            .strip_prefix(prefix.0.as_slice())
            .map(|r| Position(r.to_vec()))
    }

    /// All prefixes, longest (self) first and ending with the root.
    pub fn prefixes(&self) -> impl Iterator<Item = Position> + '_ {
        (0..=self.0.len())
            .rev()
            .map(|n| Position(self.0[..n].to_vec()))
    }
}

impl Ord for Position {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Position {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        if self.0.iter().all(|&s| s <= 9) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
        } else {
            for (i, s) in self.0.iter().enumerate() {
                if i > 0 {
                    f.write_str(".")?;
                }
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Position {
    type Err = PositionParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || PositionParseError(s.to_string());
        if s.is_empty() || s == "ε" || s == "eps" {
            return Ok(Position::root());
        }
        let steps: Vec<u32> = if s.contains('.') {
            s.split('.')
                .map(|part| part.parse::<u32>().map_err(|_| err()))
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(err))
                .collect::<Result<_, _>>()?
        };
        Position::from_steps(steps).ok_or_else(err)
    }
}
