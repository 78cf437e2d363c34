//! Complete deterministic bottom-up tree automata: definition, validation,
//! runs under assignments, and acceptance.

mod assignment;
mod format;
mod machine;

pub use assignment::{
    assignment_count, check_cap, enumerate_assignments, Assignment, AssignmentParseError,
    Assignments, CapExceeded, DEFAULT_CAP,
};
pub use format::{parse_automaton, write_automaton};
pub use machine::{
    Acceptance, Automaton, AutomatonDef, AutomatonError, MissingTransition, Rule, RunError, StateId,
};

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::terms::{parse_term, Term};

    pub(crate) const EXAMPLE1: &str = include_str!("../../../../fixtures/example1.aut");

    pub(crate) fn example1() -> Automaton {
        parse_automaton(EXAMPLE1).unwrap().validate().unwrap()
    }

    fn term(a: &Automaton, s: &str) -> Term {
        parse_term(a.signature(), s).unwrap()
    }

    fn assign(a: &Automaton, s: &str) -> Assignment {
        Assignment::parse(a.signature(), s).unwrap()
    }

    fn run(a: &Automaton, t: &str, g: &str) -> String {
        let q = a.run(&term(a, t), &assign(a, g)).unwrap();
        a.state_name(q).to_string()
    }

    #[test]
    fn example1_validates() {
        let a = example1();
        assert_eq!(a.num_states(), 2);
        assert_eq!(
            a.final_states()
                .map(|q| a.state_name(q))
                .collect::<Vec<_>>(),
            ["q1"]
        );
    }

    #[test]
    fn missing_transition_is_reported() {
        let mut def = parse_automaton(EXAMPLE1).unwrap();
        def.rules.retain(|r| r.lhs() != "g2(q1,q1)");
        let err = def.validate().unwrap_err();
        assert_eq!(
            err,
            AutomatonError::IncompleteDelta(vec![MissingTransition {
                symbol: "g2".into(),
                states: vec!["q1".into(), "q1".into()],
            }])
        );
        assert!(err.to_string().contains("g2(q1,q1)"));
    }

    #[test]
    fn every_missing_transition_is_listed() {
        let mut def = parse_automaton(EXAMPLE1).unwrap();
        def.rules.retain(|r| r.symbol != "g1" && r.symbol != "0");
        match def.validate().unwrap_err() {
            AutomatonError::IncompleteDelta(missing) => {
                let shown: Vec<String> = missing.iter().map(|m| m.to_string()).collect();
                assert_eq!(
                    shown,
                    ["0", "g1(q0,q0)", "g1(q0,q1)", "g1(q1,q0)", "g1(q1,q1)"]
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_names_are_rejected() {
        let mut def = parse_automaton(EXAMPLE1).unwrap();
        def.final_states.push("q9".into());
        assert_eq!(
            def.validate().unwrap_err(),
            AutomatonError::UnknownState("q9".into())
        );

        let mut def = parse_automaton(EXAMPLE1).unwrap();
        def.rules.push(Rule {
            symbol: "h".into(),
            args: vec![],
            target: "q0".into(),
        });
        assert_eq!(
            def.validate().unwrap_err(),
            AutomatonError::UnknownSymbol("h".into())
        );

        let mut def = parse_automaton(EXAMPLE1).unwrap();
        def.rules[0].target = "q7".into();
        assert_eq!(
            def.validate().unwrap_err(),
            AutomatonError::UnknownState("q7".into())
        );

        let mut def = parse_automaton(EXAMPLE1).unwrap();
        def.rules[2].args.push("q0".into());
        assert!(matches!(
            def.validate().unwrap_err(),
            AutomatonError::ArityMismatch { .. }
        ));

        let mut def = parse_automaton(EXAMPLE1).unwrap();
        def.states.push("q0".into());
        assert_eq!(
            def.validate().unwrap_err(),
            AutomatonError::DuplicateState("q0".into())
        );

        let mut def = parse_automaton(EXAMPLE1).unwrap();
        let dup = def.rules[3].clone();
        def.rules.push(dup);
        assert_eq!(
            def.validate().unwrap_err(),
            AutomatonError::DuplicateRule("f1(q1)".into())
        );
    }

    #[test]
    fn run_examples() {
        let a = example1();
        assert_eq!(run(&a, "0", ""), "q0");
        assert_eq!(run(&a, "f1(x2)", "x2=0"), "q1");
        assert_eq!(run(&a, "g2(g1(f1(x2),x1),x1)", "x1=1,x2=0"), "q1");
        let err = a
            .run(&term(&a, "g1(x1,x3)"), &assign(&a, "x1=0"))
            .unwrap_err();
        assert_eq!(
            err,
            RunError::UnboundVariable(crate::terms::Var::new(3).unwrap())
        );
    }

    #[test]
    fn accepts_examples() {
        let a = example1();
        let ground = a.accepts(&term(&a, "1"), 0).unwrap();
        assert!(ground.accepted);
        let acc = a.accepts(&term(&a, "g2(x1,x2)"), DEFAULT_CAP).unwrap();
        assert_eq!(
            acc.witness.map(|w| w.display(a.signature()).to_string()),
            Some("x1=1,x2=1".into())
        );
        assert!(
            !a.accepts(&term(&a, "g2(0,0)"), DEFAULT_CAP)
                .unwrap()
                .accepted
        );
        let err = a.accepts(&term(&a, "g2(x1,x2)"), 3).unwrap_err();
        assert_eq!(
            err,
            CapExceeded {
                constants: 2,
                variables: 2,
                cap: 3
            }
        );
    }

    #[test]
    fn sink_completion() {
        let mut def = parse_automaton(EXAMPLE1).unwrap();
        def.rules.retain(|r| r.lhs() != "g2(q1,q1)");
        def.states.push("sink".into());
        def.rules.retain(|r| r.lhs() != "0");
        let sink = def.complete_with_sink().unwrap();
        assert_eq!(sink, "sink1");
        let a = def.validate().unwrap();
        let sink = a.state(&sink).unwrap();
        assert!(!a.is_final(sink));
        let g2 = a.signature().operator("g2").unwrap();
        assert_eq!(
            a.transition(g2, &[a.state("q1").unwrap(), a.state("q1").unwrap()]),
            sink
        );
        assert_eq!(a.leaf_state(a.signature().constant("0").unwrap()), sink);

        let mut complete = parse_automaton(EXAMPLE1).unwrap();
        assert_eq!(complete.complete_with_sink(), None);
        assert_eq!(complete, parse_automaton(EXAMPLE1).unwrap());
    }
}
