use std::fmt;

use crate::automaton::{check_cap, Automaton};
use crate::terms::{Position, Signature, Term, Var};

use super::state_function::Tabulator;
use super::AnalysisError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLink {
    pub position: Position,
    pub term: Term,
}

/// A strong chain `x = t|_p ⊲ … ⊲ t|_ε = t` along the root path of one
/// occurrence of `x`, with `x` essential in every link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCertificate {
    pub variable: Var,
    pub occurrence: Position,
    /// From the occurrence (the variable itself) up to the root.
    pub chain: Vec<ChainLink>,
}

/// One occurrence that was tried and the first position on its root path
/// where the variable stopped being essential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainAttempt {
    pub occurrence: Position,
    pub broken_at: Position,
}

/// Everything [`essential_chain`] looked at before giving up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSearchTrace {
    pub variable: Var,
    pub attempts: Vec<ChainAttempt>,
}

impl fmt::Display for ChainSearchTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.variable)?;
        for a in &self.attempts {
            write!(f, " occurrence {} broken at {};", a.occurrence, a.broken_at)?;
        }
        Ok(())
    }
}

impl ChainCertificate {
    /// `position:term` pairs from the occurrence to the root.
    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        CertificateDisplay { sig, cert: self }
    }
}

struct CertificateDisplay<'a> {
    sig: &'a Signature,
    cert: &'a ChainCertificate,
}

impl fmt::Display for CertificateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, link) in self.cert.chain.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}:{}", link.position, link.term.display(self.sig))?;
        }
        Ok(())
    }
}

/// Finds a strong chain of subterms from an occurrence of `x` to the root of
/// `t` such that `x` is essential in every element.
///
/// Occurrences are tried leftmost first and the first complete chain is
/// returned. If `x` is essential in `t`, some child containing `x` keeps `x`
/// essential, so such a chain always exists; not finding one is reported as
/// [`AnalysisError::TheoremViolation`] with the full search trace.
pub fn essential_chain(
    a: &Automaton,
    t: &Term,
    x: Var,
    cap: u64,
) -> Result<ChainCertificate, AnalysisError> {
    check_cap(a.signature().num_constants(), t.variables().len(), cap)?;
    let mut tab = Tabulator::new(a);
    if !tab.table(t).is_essential(x) {
        return Err(AnalysisError::NotEssential(x));
    }
    let mut attempts = Vec::new();
    for occurrence in t.occurrences(x) {
        let mut chain = Vec::new();
        let mut broken_at = None;
        for p in occurrence.prefixes() {
            let sub = t.subterm(&p).expect("prefix of an occurrence");
            if !tab.table(sub).is_essential(x) {
                broken_at = Some(p);
                break;
            }
            chain.push(ChainLink {
                position: p,
                term: sub.clone(),
            });
        }
        match broken_at {
            None => {
                return Ok(ChainCertificate {
                    variable: x,
                    occurrence,
                    chain,
                });
            }
            Some(broken_at) => attempts.push(ChainAttempt {
                occurrence,
                broken_at,
            }),
        }
    }
    Err(AnalysisError::TheoremViolation(Box::new(
        ChainSearchTrace {
            variable: x,
            attempts,
        },
    )))
}
