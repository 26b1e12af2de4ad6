mod common;

use common::formula;
use nec_core::closure::{box_args, constant_part, overline_closure, sub, sub_star, ClosureSets};
use nec_core::formula::{parse, Formula, Kind};
use proptest::prelude::*;

const VARS: &[&str] = &["p", "q"];

fn children(a: &Formula) -> Vec<Formula> {
    match a.kind() {
        Kind::Bot | Kind::Top | Kind::Var(_) => vec![],
        Kind::Not(b) | Kind::Box(b) => vec![b.clone()],
        Kind::And(b, c) | Kind::Or(b, c) | Kind::Imp(b, c) => vec![b.clone(), c.clone()],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn sub_is_the_least_subformula_closed_set(a in formula(VARS, 6)) {
        let s = sub(&a);
        prop_assert!(s.contains(&a));
        for f in &s {
            for c in children(f) {
                prop_assert!(s.contains(&c));
            }
        }
        // Least: everything in it is reachable from a.
        let mut reach = vec![a.clone()];
        let mut i = 0;
        while i < reach.len() {
            let cs = children(&reach[i]);
            reach.extend(cs);
            i += 1;
        }
        prop_assert!(s.iter().all(|f| reach.contains(f)));
        prop_assert!(s.len() <= a.size());
    }

    #[test]
    fn closures_are_nested(a in formula(VARS, 6)) {
        let (s, st, cl) = (sub(&a), sub_star(&a), overline_closure(&a));
        prop_assert!(s.is_subset(&st));
        prop_assert!(st.is_subset(&cl));
        for c in constant_part() {
            prop_assert!(cl.contains(&c));
        }
    }

    #[test]
    fn sub_star_adds_boxes_of_stripped_negations(a in formula(VARS, 6)) {
        let st = sub_star(&a);
        for f in sub(&a) {
            if let Some(arg) = f.box_arg() {
                let (k, base) = arg.strip_negations();
                for j in 0..=k {
                    prop_assert!(st.contains(&Formula::boxed(base.iterated_neg(j))));
                }
            }
        }
        // Nothing else is added.
        for f in st.difference(&sub(&a)) {
            prop_assert!(f.is_box());
        }
    }

    #[test]
    fn closure_has_companions(a in formula(VARS, 6)) {
        let st = sub_star(&a);
        let cl = overline_closure(&a);
        for f in st.iter().chain(constant_part().iter()) {
            prop_assert!(cl.contains(&f.neg_companion()), "{}", f);
        }
        for f in &cl {
            prop_assert!(st.contains(f) || constant_part().contains(f) || cl.contains(&f.neg_companion()));
        }
    }
}

// Hand-computed sets.
#[test]
fn known_closures() {
    let a = parse("[]~~p -> q");
    let names = |s: &std::collections::BTreeSet<Formula>| s.iter().map(|f| f.to_string()).collect::<Vec<_>>();
    let mut sub_want = vec!["p", "q", "~p", "~~p", "[]~~p", "[]~~p -> q"];
    let mut got = names(&sub(&a));
    sub_want.sort();
    got.sort();
    assert_eq!(got, sub_want);
    let mut star_want = vec!["p", "q", "~p", "~~p", "[]p", "[]~p", "[]~~p", "[]~~p -> q"];
    let mut got = names(&sub_star(&a));
    star_want.sort();
    got.sort();
    assert_eq!(got, star_want);
    assert_eq!(names(&box_args(&sub_star(&a))).len(), 3);
    let c = ClosureSets::of(&a);
    assert_eq!(c.closure.len(), overline_closure(&a).len());
    // Sub* ∪ constants has 8 + 6 members; companions add ¬q, ¬[]p, ¬[]~p,
    // ¬[]~~p, ¬([]~~p -> q) and ¬⊥, ¬⊤ (¬¬□⊥-style companions of the
    // negated constants are their unnegated forms, already present; ~p and
    // ~~p give p and ~p).
    assert_eq!(c.closure.len(), 14 + 7);
}
