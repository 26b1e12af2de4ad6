#![allow(dead_code)]

use nec_core::closure::{box_args, sub_star};
use nec_core::formula::Formula;
use nec_core::sandbox::SFormula;
use proptest::prelude::*;

/// Formulas over `vars`, ⊥ and ⊤ with at most `depth` nested connectives.
pub fn formula(vars: &'static [&'static str], depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::bot()),
        1 => Just(Formula::top()),
        4 => prop::sample::select(vars).prop_map(Formula::var),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::boxed),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
    .boxed()
}

/// Indices a random frame needs to interpret `a`: the box arguments of
/// Sub*(a), their negations and ⊥.
pub fn indices_for(a: &Formula) -> Vec<Formula> {
    let mut out = box_args(&sub_star(a));
    let negs: Vec<Formula> = out.iter().map(|b| Formula::not(b.clone())).collect();
    out.extend(negs);
    out.insert(Formula::bot());
    out.into_iter().collect()
}

/// Sandbox outputs that never mention images of modal formulas: plain atoms,
/// marker atoms, Pr-literals over those, and tautologies.
pub fn safe_output() -> BoxedStrategy<SFormula> {
    let atom = prop_oneof![
        prop::sample::select(&["a", "b", "c"][..]).prop_map(SFormula::atom),
        (0u64..4).prop_map(SFormula::lambda),
    ];
    let lit = atom.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(SFormula::neg),
            inner.clone().prop_map(SFormula::dagger),
            (inner.clone(), inner).prop_map(|(a, b)| SFormula::imp(a, b)),
        ]
    });
    prop_oneof![
        4 => lit.clone(),
        1 => lit.prop_map(|x| SFormula::imp(x.clone(), x)),
    ]
    .boxed()
}
