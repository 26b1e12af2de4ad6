mod common;

use common::formula;
use nec_core::closure::sub_star;
use nec_core::corpus::{agreement, one_variable};
use nec_core::formula::{parse, Formula};
use nec_core::logic::Logic;
use nec_core::par::Execution;
use nec_core::prover::{
    build_canonical_model, decide, saturation_oracle, verify_certificate, verify_countermodel, OracleConfig,
    OracleVerdict, Prover, Verdict, VerdictKind,
};
use nec_core::semantics::{check_frame_class, repair_transitive, FrameClass};
use proptest::prelude::*;

fn verdict(l: Logic, src: &str) -> Verdict {
    decide(&Prover::new(l), &parse(src)).unwrap_or_else(|e| panic!("{l} {src}: {e}"))
}

// Reference verdicts for the axiom schemas and a non-theorem of ND4.
#[test]
fn reference_verdicts() {
    let provable = [
        (Logic::NP, "~[]false"),
        (Logic::NP4, "~[]false"),
        (Logic::ND, "~([]p & []~p)"),
        (Logic::ND4, "~([]p & []~p)"),
        (Logic::N4, "[]p -> [][]p"),
        (Logic::NP4, "[]p -> [][]p"),
        (Logic::ND4, "[]p -> [][]p"),
        (Logic::ND, "~[](p & ~p)"),
    ];
    let unprovable = [
        (Logic::N, "~[]false"),
        (Logic::N, "[]p -> [][]p"),
        (Logic::NP, "~([]p & []~p)"),
        (Logic::NP4, "~([]p & []~p)"),
        (Logic::ND4, "([]~~p -> []p) & ([]p -> []~~p)"),
    ];
    for (l, src) in provable {
        let v = verdict(l, src);
        assert_eq!(v.verdict, VerdictKind::Provable, "{l} {src}");
        assert!(verify_certificate(l, v.certificate.as_ref().unwrap()));
    }
    for (l, src) in unprovable {
        let v = verdict(l, src);
        assert_eq!(v.verdict, VerdictKind::Unprovable, "{l} {src}");
        let (m, w) = v.countermodel().unwrap().unwrap();
        assert!(verify_countermodel(l, &m, w, &parse(src)).unwrap());
    }
}

#[test]
fn agrees_with_saturation_oracle_up_to_five_nodes() {
    let corpus = one_variable(5);
    for l in Logic::ALL {
        let r = agreement(l, &corpus, 2, OracleConfig::default(), Execution::best());
        assert_eq!(r.total, corpus.len());
        assert_eq!(r.errors, 0, "{l}");
        assert_eq!(r.unknown, 0, "{l}");
        assert!(r.disagreements.is_empty(), "{l}: {:?}", &r.disagreements[..r.disagreements.len().min(3)]);
    }
}

#[test]
fn stronger_logics_prove_more() {
    let corpus = one_variable(5);
    let proved: Vec<(Logic, Vec<bool>)> = Logic::ALL
        .iter()
        .map(|&l| {
            let p = Prover::new(l);
            (l, Execution::best().map(&corpus, |a| decide(&p, a).unwrap().is_provable()))
        })
        .collect();
    for (l, pl) in &proved {
        for (k, pk) in &proved {
            if l.extends(*k) {
                for (i, a) in corpus.iter().enumerate() {
                    assert!(!pk[i] || pl[i], "{k} proves {a} but {l} does not");
                }
            }
        }
    }
}

#[test]
fn verdicts_survive_json() {
    for (l, src) in [(Logic::ND, "~([]p & []~p)"), (Logic::ND4, "([]~~p -> []p) & ([]p -> []~~p)")] {
        let v = verdict(l, src);
        let back: Verdict = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(back, v);
    }
}

#[test]
fn oracle_config_bounds_are_respected() {
    // With no pool and no worlds the oracle can only recognise tautologies.
    let cfg = OracleConfig { pool_depth: 0, max_worlds: 0 };
    assert_eq!(saturation_oracle(Logic::N, &parse("p -> p"), cfg), OracleVerdict::Provable);
    assert_eq!(saturation_oracle(Logic::N, &parse("[]p -> [][]p"), cfg), OracleVerdict::Unknown);
}

const VARS: &[&str] = &["p", "q"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn canonical_model_satisfies_truth_lemma(a in formula(VARS, 4), li in 0usize..6) {
        let l = Logic::ALL[li];
        let c = build_canonical_model(&Prover::new(l), &a).unwrap();
        prop_assert!(c.truth_lemma_failures(&c.model).is_empty());
        let gamma = FrameClass::GammaTransitive(sub_star(&a));
        if l.has_four() {
            prop_assert!(check_frame_class(&c.model.frame, &gamma).unwrap().holds);
            let repaired = repair_transitive(&c.model.frame, &a);
            prop_assert!(check_frame_class(&repaired, &FrameClass::Transitive).unwrap().holds);
        }
    }

    #[test]
    fn decide_matches_oracle_on_two_variables(a in formula(VARS, 3), li in 0usize..6) {
        let l = Logic::ALL[li];
        let v = decide(&Prover::new(l), &a).unwrap();
        let o = saturation_oracle(l, &a, OracleConfig::default());
        let want = if v.is_provable() { OracleVerdict::Provable } else { OracleVerdict::Unprovable };
        prop_assert!(o == want || o == OracleVerdict::Unknown, "{} {}: {:?} vs {:?}", l, a, v.verdict, o);
    }

    #[test]
    fn evidence_checks_out(a in formula(VARS, 4), li in 0usize..6) {
        let l = Logic::ALL[li];
        let v = decide(&Prover::new(l), &a).unwrap();
        match &v.certificate {
            Some(c) => {
                prop_assert_eq!(&c.goal, &a);
                prop_assert!(verify_certificate(l, c));
            }
            None => {
                let (m, w) = v.countermodel().unwrap().unwrap();
                prop_assert!(verify_countermodel(l, &m, w, &a).unwrap());
            }
        }
    }

    #[test]
    fn tampered_certificates_fail(a in formula(VARS, 3)) {
        let l = Logic::ND4;
        let v = decide(&Prover::new(l), &Formula::imp(a.clone(), a.clone())).unwrap();
        let mut c = v.certificate.unwrap();
        c.goal = Formula::and(a.clone(), Formula::not(a));
        prop_assert!(!verify_certificate(l, &c));
    }
}
