//! Seeded generation of signatures, complete automata and terms.
//!
//! Everything is driven by [`SplitMix64`] and consumes random numbers in a
//! fixed documented order, so a seed reproduces the same instance in any
//! implementation that follows the same steps:
//!
//! * signature: no randomness. Constants are `0, 1, …`; operators get the
//!   prefix `f`, `g`, `h` for arities 1, 2, 3 (`o<arity>_` beyond) and are
//!   numbered from 1 per arity, e.g. arities `[1, 2, 2]` give `f1 g1 g2`.
//! * automaton, stream seeded with `seed`: state count `1 + below(max_states)`;
//!   final mask, one `chance(final_state_probability)` per state, redrawn
//!   while empty (with probability 0 a single `below(|Q|)` state is final);
//!   then `below(|Q|)` for each leaf rule in constant order and for each
//!   operator rule in declaration order with argument tuples in
//!   lexicographic order.
//! * term, stream seeded with `seed ^ TERM_STREAM`: preorder; a node at depth
//!   `d` is a leaf when `d = max_depth`, the signature has no operators, or
//!   `chance(d / max_depth)`; a leaf is a variable `x(1 + below(max_vars))`
//!   when `max_vars > 0` and `below(2) = 0`, else constant `below(|F₀|)`;
//!   an inner node picks operator `below(#ops)`.

use std::fmt;

use thiserror::Error;

use crate::automaton::{Automaton, AutomatonDef, Rule};
use crate::terms::{ConstId, OpId, Signature, Term, Var};

/// XORed into the seed for the term stream.
pub const TERM_STREAM: u64 = 0x5DEE_CE66_D1CE_4E5B;

/// SplitMix64 (Steele, Lea, Flood 2014).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish in `0..n` by reduction modulo `n`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        self.next_u64() % n
    }

    /// Uniform in `[0, 1)` with 53 bits.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    /// Fisher–Yates, from the back.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_states: usize,
    pub num_constants: usize,
    pub operator_arities: Vec<usize>,
    pub max_depth: usize,
    pub max_vars: usize,
    pub final_state_probability: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_states: 3,
            num_constants: 2,
            operator_arities: vec![1, 2, 2],
            max_depth: 4,
            max_vars: 3,
            final_state_probability: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenConfigError {
    #[error("num-constants must be at least 1")]
    NoConstants,
    #[error("max-states must be at least 1")]
    NoStates,
    #[error("operator arities must be at least 1")]
    ZeroArity,
    #[error("final-state probability must lie in [0, 1]")]
    BadProbability,
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenConfigError> {
        if self.num_constants == 0 {
            return Err(GenConfigError::NoConstants);
        }
        if self.max_states == 0 {
            return Err(GenConfigError::NoStates);
        }
        if self.operator_arities.contains(&0) {
            return Err(GenConfigError::ZeroArity);
        }
        if !(0.0..=1.0).contains(&self.final_state_probability) {
            return Err(GenConfigError::BadProbability);
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> GenConfig {
        GenConfig {
            seed,
            ..self.clone()
        }
    }
}

impl fmt::Display for GenConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arities: Vec<String> = self
            .operator_arities
            .iter()
            .map(ToString::to_string)
            .collect();
        write!(
            f,
            "seed={} max-states={} num-constants={} operator-arities={} max-depth={} max-vars={} final-state-probability={}",
            self.seed,
            self.max_states,
            self.num_constants,
            arities.join(","),
            self.max_depth,
            self.max_vars,
            self.final_state_probability
        )
    }
}

pub fn gen_signature(cfg: &GenConfig) -> Signature {
    let constants = (0..cfg.num_constants).map(|i| i.to_string()).collect();
    let mut per_arity = std::collections::HashMap::new();
    let operators = cfg
        .operator_arities
        .iter()
        .map(|&arity| {
            let n = per_arity.entry(arity).or_insert(0);
            *n += 1;
            let prefix = match arity {
                1 => "f".to_string(),
                2 => "g".to_string(),
                3 => "h".to_string(),
                _ => format!("o{arity}_"),
            };
            (format!("{prefix}{n}"), arity)
        })
        .collect();
    Signature::new(constants, operators).expect("generated names are distinct and valid")
}

/// A random complete automaton over [`gen_signature`]. Panics on an invalid
/// config; call [`GenConfig::validate`] first.
pub fn gen_automaton(cfg: &GenConfig) -> Automaton {
    cfg.validate().expect("invalid generator config");
    let mut rng = SplitMix64::new(cfg.seed);
    let signature = gen_signature(cfg);
    let n = 1 + rng.below(cfg.max_states as u64) as usize;
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();

    let final_mask = if cfg.final_state_probability <= 0.0 {
        let pick = rng.below(n as u64) as usize;
        (0..n).map(|i| i == pick).collect()
    } else {
        loop {
            let mask: Vec<bool> = (0..n)
                .map(|_| rng.chance(cfg.final_state_probability))
                .collect();
            if mask.contains(&true) {
                break mask;
            }
        }
    };
    let final_states = states
        .iter()
        .zip(&final_mask)
        .filter(|(_, f)| **f)
        .map(|(q, _)| q.clone())
        .collect();

    let mut rules = Vec::new();
    for c in signature.constants() {
        rules.push(Rule {
            symbol: signature.const_name(c).to_string(),
            args: Vec::new(),
            target: states[rng.below(n as u64) as usize].clone(),
        });
    }
    for op in signature.operators() {
        let arity = signature.arity(op);
        let mut tuple = vec![0usize; arity];
        loop {
            rules.push(Rule {
                symbol: signature.op_name(op).to_string(),
                args: tuple.iter().map(|&i| states[i].clone()).collect(),
                target: states[rng.below(n as u64) as usize].clone(),
            });
            let Some(slot) = tuple.iter().rposition(|&i| i + 1 < n) else {
                break;
            };
            tuple[slot] += 1;
            tuple[slot + 1..].iter_mut().for_each(|i| *i = 0);
        }
    }
    AutomatonDef {
        signature,
        states,
        final_states,
        rules,
    }
    .validate()
    .expect("generated automata are complete")
}

/// A random term of depth at most `max_depth` over `sig` and `x1…x{max_vars}`.
pub fn gen_term(cfg: &GenConfig, sig: &Signature) -> Term {
    let mut rng = SplitMix64::new(cfg.seed ^ TERM_STREAM);
    gen_node(cfg, sig, &mut rng, 0)
}

fn gen_node(cfg: &GenConfig, sig: &Signature, rng: &mut SplitMix64, depth: usize) -> Term {
    let leaf = depth >= cfg.max_depth
        || sig.num_operators() == 0
        || rng.chance(depth as f64 / cfg.max_depth as f64);
    if leaf {
        if cfg.max_vars > 0 && rng.below(2) == 0 {
            let i = 1 + rng.below(cfg.max_vars as u64) as u32;
            return Term::var(Var::new(i).expect("index is positive"));
        }
        return Term::constant(ConstId(rng.below(sig.num_constants() as u64) as u32));
    }
    let op = OpId(rng.below(sig.num_operators() as u64) as u32);
    let children = (0..sig.arity(op))
        .map(|_| gen_node(cfg, sig, rng, depth + 1))
        .collect();
    sig.apply(op, children).expect("arity respected")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::essential_inputs;
    use crate::automaton::DEFAULT_CAP;

    #[test]
    fn splitmix_reference_values() {
        // first outputs for seed 0 as published with the reference implementation
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn signature_names() {
        let sig = gen_signature(&GenConfig::default());
        let ops: Vec<&str> = sig.operators().map(|o| sig.op_name(o)).collect();
        assert_eq!(ops, ["f1", "g1", "g2"]);
        let consts: Vec<&str> = sig.constants().map(|c| sig.const_name(c)).collect();
        assert_eq!(consts, ["0", "1"]);
        let cfg = GenConfig {
            operator_arities: vec![3, 4, 4],
            ..Default::default()
        };
        let sig = gen_signature(&cfg);
        let ops: Vec<&str> = sig.operators().map(|o| sig.op_name(o)).collect();
        assert_eq!(ops, ["h1", "o4_1", "o4_2"]);
    }

    #[test]
    fn single_state_automaton_has_no_essential_inputs() {
        let cfg = GenConfig {
            max_states: 1,
            ..Default::default()
        };
        for seed in 0..50 {
            let cfg = cfg.with_seed(seed);
            let a = gen_automaton(&cfg);
            assert_eq!(a.num_states(), 1);
            let t = gen_term(&cfg, a.signature());
            assert!(essential_inputs(&a, &t, DEFAULT_CAP).unwrap().is_empty());
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let cfg = GenConfig {
            seed: 42,
            ..Default::default()
        };
        let a = gen_automaton(&cfg);
        assert_eq!(a, gen_automaton(&cfg));
        assert_eq!(gen_term(&cfg, a.signature()), gen_term(&cfg, a.signature()));
        assert!(a.final_states().next().is_some());
    }

    #[test]
    fn depth_and_variable_bounds() {
        for seed in 0..200 {
            let cfg = GenConfig {
                seed,
                max_depth: 3,
                max_vars: 2,
                ..Default::default()
            };
            let a = gen_automaton(&cfg);
            let t = gen_term(&cfg, a.signature());
            assert!(t.depth() <= 3);
            assert!(t.variables().iter().all(|x| x.index() <= 2));
        }
        let leaf = GenConfig {
            max_depth: 0,
            ..Default::default()
        };
        let sig = gen_signature(&leaf);
        assert_eq!(gen_term(&leaf, &sig).depth(), 0);
        let ground = GenConfig {
            max_vars: 0,
            ..Default::default()
        };
        for seed in 0..50 {
            assert!(gen_term(&ground.with_seed(seed), &sig).is_ground());
        }
    }

    #[test]
    fn zero_final_probability_still_has_a_final_state() {
        let cfg = GenConfig {
            final_state_probability: 0.0,
            ..Default::default()
        };
        assert_eq!(gen_automaton(&cfg).final_states().count(), 1);
    }

    #[test]
    fn config_validation() {
        assert_eq!(
            GenConfig {
                num_constants: 0,
                ..Default::default()
            }
            .validate(),
            Err(GenConfigError::NoConstants)
        );
        assert_eq!(
            GenConfig {
                final_state_probability: 1.5,
                ..Default::default()
            }
            .validate(),
            Err(GenConfigError::BadProbability)
        );
        assert_eq!(
            GenConfig::default().to_string(),
            "seed=0 max-states=3 num-constants=2 operator-arities=1,2,2 max-depth=4 max-vars=3 final-state-probability=0.5"
        );
    }
}
