//! Randomized checking of the structural theorems about essential inputs.
//!
//! Each [`Property`] has a single-instance check ([`check_instance`]) and a
//! campaign driver ([`run_campaign`]) that feeds it seeded random instances
//! and keeps every failing instance whole.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::analysis::{
    check_theorem2, essential_chain, essential_inputs, essential_inputs_by_pairs, AnalysisError,
    Tabulator,
};
use crate::automaton::{check_cap, Automaton, CapExceeded};
use crate::genrand::{gen_automaton, gen_term, GenConfig, SplitMix64};
use crate::reduce::{find_fictive_removal, find_subtree_replacement};
use crate::terms::{Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    /// Every essential input has a chain of essential subterms up to the root.
    Theorem1,
    /// At least two essential inputs imply a strongly essential one.
    Theorem2,
    /// At least two essential inputs imply two strongly essential ones.
    Corollary1,
    /// Equal state functions imply equal essential inputs.
    Prop1,
    /// The tabulated and the pair-scanning essential-input routes agree.
    OracleEss,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Theorem1,
        Property::Theorem2,
        Property::Corollary1,
        Property::Prop1,
        Property::OracleEss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Theorem1 => "theorem1",
            Property::Theorem2 => "theorem2",
            Property::Corollary1 => "corollary1",
            Property::Prop1 => "prop1",
            Property::OracleEss => "oracle-ess",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown property `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseOutcome {
    /// The property's hypothesis does not hold for this instance.
    Skipped,
    Pass,
    Fail(String),
}

fn vars(v: &[Var]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Checks one instance against the testable form of `property`.
pub fn check_instance(
    property: Property,
    a: &Automaton,
    t: &Term,
    cap: u64,
) -> Result<CaseOutcome, CapExceeded> {
    match property {
        Property::Theorem1 => theorem1(a, t, cap),
        Property::Theorem2 | Property::Corollary1 => {
            let report = check_theorem2(a, t, cap).map_err(expect_cap)?;
            let holds = match property {
                Property::Theorem2 => report.theorem2_holds(),
                _ => report.corollary1_holds(),
            };
            Ok(match holds {
                None => CaseOutcome::Skipped,
                Some(true) => CaseOutcome::Pass,
                Some(false) => CaseOutcome::Fail(format!(
                    "essential: {}; strongly essential: {}",
                    vars(&report.essential),
                    vars(&report.strongly_essential())
                )),
            })
        }
        Property::Prop1 => prop1(a, t, cap),
        Property::OracleEss => {
            let by_table = essential_inputs(a, t, cap)?;
            let by_pairs = essential_inputs_by_pairs(a, t, cap)?;
            Ok(if by_table == by_pairs {
                CaseOutcome::Pass
            } else {
                CaseOutcome::Fail(format!(
                    "state function: {}; pair scan: {}",
                    vars(&by_table),
                    vars(&by_pairs)
                ))
            })
        }
    }
}

fn expect_cap(e: AnalysisError) -> CapExceeded {
    match e {
        AnalysisError::CapExceeded(c) => c,
        other => panic!("precondition checked by caller: {other}"),
    }
}

fn theorem1(a: &Automaton, t: &Term, cap: u64) -> Result<CaseOutcome, CapExceeded> {
    let ess = essential_inputs(a, t, cap)?;
    if ess.is_empty() {
        return Ok(CaseOutcome::Skipped);
    }
    for x in ess {
        match essential_chain(a, t, x, cap) {
            Ok(cert) => {
                let steps_ok = cert.chain.windows(2).all(|w| {
                    w[1].position.len() + 1 == w[0].position.len()
                        && w[1].position.is_prefix_of(&w[0].position)
                });
                let ends_ok = cert.chain.first().map(|l| l.term.as_var()) == Some(Some(x))
                    && cert.chain.last().map(|l| &l.term) == Some(t);
                if !steps_ok || !ends_ok {
                    return Ok(CaseOutcome::Fail(format!("malformed chain for {x}")));
                }
            }
            Err(AnalysisError::CapExceeded(c)) => return Err(c),
            Err(AnalysisError::TheoremViolation(trace)) => {
                return Ok(CaseOutcome::Fail(format!(
                    "no chain reaches the root: {trace}"
                )));
            }
            Err(other) => return Ok(CaseOutcome::Fail(format!("{x}: {other}"))),
        }
    }
    Ok(CaseOutcome::Pass)
}

fn prop1(a: &Automaton, t: &Term, cap: u64) -> Result<CaseOutcome, CapExceeded> {
    let step = match find_fictive_removal(a, t, cap)? {
        Some(s) => Some(s),
        None => find_subtree_replacement(a, t, false, cap)?,
    };
    let Some(step) = step else {
        return Ok(CaseOutcome::Skipped);
    };
    let before = essential_inputs(a, &step.before, cap)?;
    let after = essential_inputs(a, &step.after, cap)?;
    if before != after {
        return Ok(CaseOutcome::Fail(format!(
            "reduction changed Ess: {} became {}",
            vars(&before),
            vars(&after)
        )));
    }

    // every equivalent (ancestor, descendant) pair inside t
    check_cap(a.signature().num_constants(), t.variables().len(), cap)?;
    let mut tab = Tabulator::new(a);
    let positions = t.positions();
    for p in &positions {
        for q in positions
            .iter()
            .filter(|q| q.len() > p.len() && p.is_prefix_of(q))
        {
            let (fp, fq) = (
                tab.table(t.subterm(p).unwrap()),
                tab.table(t.subterm(q).unwrap()),
            );
            if !fp.same_function(&fq) {
                continue;
            }
            let ep: BTreeSet<Var> = fp.essential_vars().into_iter().collect();
            let eq: BTreeSet<Var> = fq.essential_vars().into_iter().collect();
            let shared: BTreeSet<Var> = fp
                .vars()
                .iter()
                .filter(|x| fq.vars().contains(x))
                .copied()
                .collect();
            let only_p = fp.vars().iter().filter(|x| !shared.contains(x));
            let only_q = fq.vars().iter().filter(|x| !shared.contains(x));
            let fictive_outside =
                only_p.clone().all(|x| !ep.contains(x)) && only_q.clone().all(|x| !eq.contains(x));
            if ep.intersection(&shared).ne(eq.intersection(&shared)) || !fictive_outside {
                return Ok(CaseOutcome::Fail(format!(
                    "equivalent subterms at {p} and {q} differ in essential inputs"
                )));
            }
        }
    }
    Ok(CaseOutcome::Pass)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignConfig {
    pub property: Property,
    pub gen: GenConfig,
    /// Number of applicable cases wanted.
    pub cases: usize,
    pub cap: u64,
}

/// A failing instance, kept whole.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub property: Property,
    pub attempt: usize,
    pub gen: GenConfig,
    pub automaton: Automaton,
    pub term: Term,
    pub detail: String,
}

impl Counterexample {
    /// Standalone automaton file contents.
    pub fn automaton_text(&self) -> String {
        format!(
            "# {} counterexample, attempt {}\n# {}\n# {}\n{}",
            self.property,
            self.attempt,
            self.gen,
            self.detail,
            self.automaton.to_text()
        )
    }

    /// Standalone term file contents.
    pub fn term_text(&self) -> String {
        format!(
            "# {} counterexample, attempt {}\n{}\n",
            self.property,
            self.attempt,
            self.term.display(self.automaton.signature())
        )
    }

    /// Base file name, without extension.
    pub fn file_stem(&self) -> String {
        format!("{}-attempt{}", self.property, self.attempt)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignReport {
    pub property: Property,
    pub gen: GenConfig,
    pub requested: usize,
    pub attempts: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failures: Vec<Counterexample>,
}

impl CampaignReport {
    pub fn applicable(&self) -> usize {
        self.passed + self.failures.len()
    }

    pub fn under_filled(&self) -> bool {
        self.applicable() < self.requested
    }

    pub fn pass_rate(&self) -> f64 {
        if self.applicable() == 0 {
            1.0
        } else {
            self.passed as f64 / self.applicable() as f64
        }
    }

    /// `field: value` lines in a fixed order.
    pub fn to_text(&self) -> String {
        format!(
            "property: {}\nconfig: {}\ncases: {}\nattempts: {}\napplicable: {}\nskipped: {}\npassed: {}\nfailures: {}\npass-rate: {:.6}\nunder-filled: {}\n",
            self.property,
            self.gen,
            self.requested,
            self.attempts,
            self.applicable(),
            self.skipped,
            self.passed,
            self.failures.len(),
            self.pass_rate(),
            if self.under_filled() { "yes" } else { "no" },
        )
    }
}

/// Seed of attempt `i`: the `i`-th output of a SplitMix64 stream seeded with
/// the campaign seed.
pub fn attempt_seeds(base: u64) -> impl Iterator<Item = u64> {
    let mut rng = SplitMix64::new(base);
    std::iter::repeat_with(move || rng.next_u64())
}

/// Generates instances until `cases` applicable ones were checked or
/// `100 × cases` attempts were made.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport, CapExceeded> {
    let mut report = CampaignReport {
        property: cfg.property,
        gen: cfg.gen.clone(),
        requested: cfg.cases,
        attempts: 0,
        passed: 0,
        skipped: 0,
        failures: Vec::new(),
    };
    let max_attempts = cfg.cases.saturating_mul(100);
    for (attempt, seed) in attempt_seeds(cfg.gen.seed).enumerate() {
        if report.applicable() >= cfg.cases || attempt >= max_attempts {
            break;
        }
        report.attempts += 1;
        let gen = cfg.gen.with_seed(seed);
        let a = gen_automaton(&gen);
        let t = gen_term(&gen, a.signature());
        match check_instance(cfg.property, &a, &t, cfg.cap)? {
            CaseOutcome::Skipped => report.skipped += 1,
            CaseOutcome::Pass => report.passed += 1,
            CaseOutcome::Fail(detail) => report.failures.push(Counterexample {
                property: cfg.property,
                attempt,
                gen,
                automaton: a,
                term: t,
                detail,
            }),
        }
    }
    Ok(report)
}
