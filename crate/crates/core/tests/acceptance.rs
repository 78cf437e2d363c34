//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use treeaut::analysis::{equivalent, essential_chain, essential_inputs, essential_inputs_by_pairs};
use treeaut::automaton::{parse_automaton, Automaton, DEFAULT_CAP};
use treeaut::campaign::{attempt_seeds, check_instance, CaseOutcome, Counterexample, Property};
use treeaut::genrand::{gen_automaton, gen_term, GenConfig};
use treeaut::reduce::{minimize, ReduceOptions};
use treeaut::terms::{parse_term, Position, Term, Var};

const EXAMPLE1: &str = include_str!("../../../fixtures/example1.aut");

type Outcome = Result<String, String>;
type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn example1() -> Automaton {
    parse_automaton(EXAMPLE1).unwrap().validate().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// |Q| ≤ 4, |F₀| ≤ 3, at most 4 variables, depth at most 4.
fn family_config(i: usize, seed: u64) -> GenConfig {
    GenConfig {
        seed,
        max_states: 4,
        num_constants: 1 + i % 3,
        operator_arities: if i.is_multiple_of(2) {
            vec![1, 2, 2]
        } else {
            vec![1, 2, 3]
        },
        max_depth: 4,
        max_vars: 4,
        final_state_probability: 0.5,
    }
}

fn family(base: u64) -> impl Iterator<Item = (GenConfig, Automaton, Term)> {
    attempt_seeds(base).enumerate().map(|(i, seed)| {
        let cfg = family_config(i, seed);
        let a = gen_automaton(&cfg);
        let t = gen_term(&cfg, a.signature());
        (cfg, a, t)
    })
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let a = example1();
    let sig = a.signature();
    let t = parse_term(sig, "g2(g1(f1(x2),x1),x1)").unwrap();
    let p = |s: &str| s.parse::<Position>().unwrap();
    let term = |s: &str| parse_term(sig, s).unwrap();
    let (x1, x2) = (Var::new(1).unwrap(), Var::new(2).unwrap());

    let pos: BTreeSet<Position> = t.positions().into_iter().collect();
    let want: BTreeSet<Position> = ["ε", "1", "11", "111", "12", "2"]
        .map(p)
        .into_iter()
        .collect();
    ensure(pos == want, || format!("Pos(t) = {pos:?}"))?;
    for (at, sub) in [
        ("1", "g1(f1(x2),x1)"),
        ("11", "f1(x2)"),
        ("12", "x1"),
        ("111", "x2"),
        ("2", "x1"),
    ] {
        ensure(t.subterm(&p(at)).unwrap() == &term(sub), || {
            format!("t|{at} != {sub}")
        })?;
    }
    let ess = essential_inputs(&a, &t, DEFAULT_CAP).unwrap();
    ensure(ess == vec![x1], || format!("Ess(t) = {ess:?}"))?;
    let fictive: Vec<Var> = t
        .variables()
        .into_iter()
        .filter(|x| !ess.contains(x))
        .collect();
    ensure(fictive == vec![x2], || format!("fictive = {fictive:?}"))?;
    for at in ["1", "11"] {
        let e = essential_inputs(&a, t.subterm(&p(at)).unwrap(), DEFAULT_CAP).unwrap();
        ensure(e.contains(&x2), || format!("x2 not essential in t|{at}"))?;
    }
    let sub = t.subterm(&p("1")).unwrap();
    let cert = essential_chain(&a, sub, x2, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let chain: Vec<&Term> = cert.chain.iter().map(|l| &l.term).collect();
    let want = [term("x2"), term("f1(x2)"), term("g1(f1(x2),x1)")];
    ensure(chain == want.iter().collect::<Vec<_>>(), || {
        "wrong chain".into()
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("all facts exact in {elapsed:?}"))
}

fn criterion2() -> Outcome {
    let start = Instant::now();
    let n = 1000;
    for (i, (cfg, a, t)) in family(2).take(n).enumerate() {
        let fast = essential_inputs(&a, &t, DEFAULT_CAP).unwrap();
        let slow = essential_inputs_by_pairs(&a, &t, DEFAULT_CAP).unwrap();
        ensure(fast == slow, || format!("instance {i} ({cfg}) disagrees"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("{n}/{n} instances agree in {elapsed:?}"))
}

fn criterion3() -> Outcome {
    let (mut checked, mut variables) = (0, 0);
    for (i, (cfg, a, t)) in family(3).take(50_000).enumerate() {
        if checked == 500 {
            break;
        }
        let ess = essential_inputs(&a, &t, DEFAULT_CAP).unwrap();
        for &x in &ess {
            let cert = essential_chain(&a, &t, x, DEFAULT_CAP)
                .map_err(|e| format!("instance {i} ({cfg}), {x}: {e}"))?;
            ensure(cert.chain.last().map(|l| &l.term) == Some(&t), || {
                format!("instance {i}: chain for {x} stops below the root")
            })?;
            variables += 1;
        }
        checked += usize::from(!ess.is_empty());
    }
    ensure(checked >= 500, || {
        format!("only {checked} instances with essential inputs")
    })?;
    Ok(format!(
        "{variables} essential inputs over {checked} instances, 0 failures"
    ))
}

/// Instances of the family with at least two essential inputs.
fn theorem2_cases(want: usize) -> Vec<(GenConfig, Automaton, Term)> {
    family(4)
        .take(want * 100)
        .filter(|(_, a, t)| essential_inputs(a, t, DEFAULT_CAP).unwrap().len() >= 2)
        .take(want)
        .collect()
}

fn criterion4(cases: &[(GenConfig, Automaton, Term)]) -> Outcome {
    ensure(cases.len() >= 200, || {
        format!("only {} applicable cases", cases.len())
    })?;
    for (i, (cfg, a, t)) in cases.iter().enumerate() {
        let out = check_instance(Property::Theorem2, a, t, DEFAULT_CAP).unwrap();
        ensure(out == CaseOutcome::Pass, || {
            format!("case {i} ({cfg}): {out:?}")
        })?;
    }
    Ok(format!("{} applicable cases, 0 failures", cases.len()))
}

fn criterion5(cases: &[(GenConfig, Automaton, Term)]) -> Outcome {
    ensure(cases.len() >= 200, || {
        format!("only {} applicable cases", cases.len())
    })?;
    let mut failures = Vec::new();
    let mut passed = 0;
    for (i, (cfg, a, t)) in cases.iter().enumerate() {
        match check_instance(Property::Corollary1, a, t, DEFAULT_CAP).unwrap() {
            CaseOutcome::Pass => passed += 1,
            CaseOutcome::Skipped => return Err(format!("case {i} unexpectedly not applicable")),
            CaseOutcome::Fail(detail) => failures.push(Counterexample {
                property: Property::Corollary1,
                attempt: i,
                gen: cfg.clone(),
                automaton: a.clone(),
                term: t.clone(),
                detail,
            }),
        }
    }
    // serialize every counterexample (or, if there is none, the first case)
    // and check that re-running the parsed copy gives the same verdict
    let replay: Vec<(Counterexample, bool)> = if failures.is_empty() {
        let (cfg, a, t) = &cases[0];
        vec![(
            Counterexample {
                property: Property::Corollary1,
                attempt: 0,
                gen: cfg.clone(),
                automaton: a.clone(),
                term: t.clone(),
                detail: "pass".into(),
            },
            false,
        )]
    } else {
        failures.iter().cloned().map(|c| (c, true)).collect()
    };
    for (cx, failing) in &replay {
        let a = parse_automaton(&cx.automaton_text())
            .map_err(|e| e.to_string())?
            .validate()
            .map_err(|e| e.to_string())?;
        let t = parse_term(a.signature(), &cx.term_text()).map_err(|e| e.to_string())?;
        ensure(a == cx.automaton && t == cx.term, || {
            format!("{} did not round-trip", cx.file_stem())
        })?;
        let again = check_instance(Property::Corollary1, &a, &t, DEFAULT_CAP).unwrap();
        ensure(matches!(again, CaseOutcome::Fail(_)) == *failing, || {
            format!("{} does not reproduce: {again:?}", cx.file_stem())
        })?;
    }
    let rate = passed as f64 / cases.len() as f64;
    Ok(format!(
        "{} cases, pass rate {:.4}, {} counterexamples serialized and reproduced",
        cases.len(),
        rate,
        failures.len()
    ))
}

fn criterion6() -> Outcome {
    let n = 600;
    for (i, (cfg, a, t)) in family(6).take(n).enumerate() {
        let fail = |what: &str| format!("instance {i} ({cfg}): {what}");
        let trace = minimize(&a, &t, &ReduceOptions::default(), DEFAULT_CAP).unwrap();
        ensure(
            equivalent(&a, &t, &trace.final_term, DEFAULT_CAP).unwrap(),
            || fail("not equivalent"),
        )?;
        ensure(
            essential_inputs(&a, &t, DEFAULT_CAP).unwrap()
                == essential_inputs(&a, &trace.final_term, DEFAULT_CAP).unwrap(),
            || fail("Ess changed"),
        )?;
        ensure(trace.steps.len() <= t.variables().len() + t.size(), || {
            fail("trace too long")
        })?;
        let again = minimize(
            &a,
            &trace.final_term,
            &ReduceOptions::default(),
            DEFAULT_CAP,
        )
        .unwrap();
        ensure(again.steps.is_empty(), || fail("not idempotent"))?;
    }
    Ok(format!("{n}/{n} instances"))
}

fn criterion7() -> Outcome {
    let a = example1();
    let sig = a.signature();
    let t = parse_term(sig, "g2(g1(f1(x2),x1),x1)").unwrap();
    let trace = minimize(&a, &t, &ReduceOptions::default(), DEFAULT_CAP).unwrap();
    let want = "STEP 1 FICTIVE x2 := 0\ng2(g1(f1(0),x1),x1)\n\
                STEP 2 REPLACE at 1 with subterm at 11\ng2(f1(0),x1)\n\
                STEP 3 REPLACE at ε with subterm at 2\nx1\n";
    ensure(trace.to_text(sig) == want, || {
        format!("trace:\n{}", trace.to_text(sig))
    })?;
    ensure(trace.final_term.display(sig).to_string() == "x1", || {
        "final term".into()
    })?;
    let strict = ReduceOptions {
        strict_subterm: true,
        ..Default::default()
    };
    let trace = minimize(&a, &t, &strict, DEFAULT_CAP).unwrap();
    let shown = trace.final_term.display(sig).to_string();
    ensure(shown == "g2(f1(0),x1)", || {
        format!("strict final term {shown}")
    })?;
    Ok("x1 in 3 steps; strict: g2(f1(0),x1)".into())
}

fn criterion8() -> Outcome {
    let n = 1000;
    for (i, (cfg, a, t)) in family(8).take(n).enumerate() {
        let back = parse_automaton(&a.to_text())
            .map_err(|e| format!("instance {i}: {e}"))?
            .validate()
            .map_err(|e| format!("instance {i}: {e}"))?;
        ensure(back == a, || {
            format!("instance {i} ({cfg}): automaton differs")
        })?;
        let text = t.display(a.signature()).to_string();
        let t2 = parse_term(back.signature(), &text).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(t2 == t, || format!("instance {i}: term {text} differs"))?;
    }
    Ok(format!("{n}/{n} automata and terms"))
}

fn main() {
    let theorem2 = theorem2_cases(300);
    let criteria: [(&str, Criterion); 8] = [
        ("Boolean example facts", Box::new(criterion1)),
        ("dual-oracle essential inputs", Box::new(criterion2)),
        ("chains to the root", Box::new(criterion3)),
        (
            "one strongly essential input",
            Box::new(|| criterion4(&theorem2)),
        ),
        (
            "two strongly essential inputs",
            Box::new(|| criterion5(&theorem2)),
        ),
        ("minimization semantics", Box::new(criterion6)),
        ("Boolean example minimization", Box::new(criterion7)),
        ("format round-trips", Box::new(criterion8)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
