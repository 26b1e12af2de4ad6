//! Subformula sets: Sub(A), the negation-extended Sub*(A), and the closure
//! S ∪ ∼S for S = Sub*(A) ∪ {□⊥, ¬□⊥, □⊤, ¬□⊤, ⊥, ⊤}, from which maximal
//! consistent sets are drawn.

use crate::formula::{Formula, Kind};
use crate::logic::Logic;
use serde::Serialize;
use std::collections::BTreeSet;

/// A finite formula set, iterated in Gödel-number order.
pub type FormulaSet = BTreeSet<Formula>;

pub fn sub(a: &Formula) -> FormulaSet {
    let mut out = FormulaSet::new();
    collect(a, &mut out);
    out
}

fn collect(a: &Formula, out: &mut FormulaSet) {
    if !out.insert(a.clone()) {
        return;
    }
    match a.kind() {
        Kind::Bot | Kind::Top | Kind::Var(_) => {}
        Kind::Not(b) | Kind::Box(b) => collect(b, out),
        Kind::And(b, c) | Kind::Or(b, c) | Kind::Imp(b, c) => {
            collect(b, out);
            collect(c, out);
        }
    }
}

/// Sub(A) together with □B for every □¬ᵏB ∈ Sub(A).
pub fn sub_star(a: &Formula) -> FormulaSet {
    let mut out = sub(a);
    let boxes: Vec<Formula> = out.iter().filter(|f| f.is_box()).cloned().collect();
    for bx in boxes {
        let mut arg = bx.box_arg().expect("box").clone();
        while let Some(inner) = arg.not_arg().cloned() {
            out.insert(Formula::boxed(inner.clone()));
            arg = inner;
        }
    }
    out
}

/// The four modal constants every closure contains, plus ⊥ and ⊤.
pub fn constant_part() -> [Formula; 6] {
    let bb = Formula::boxed(Formula::bot());
    let bt = Formula::boxed(Formula::top());
    [bb.clone(), Formula::not(bb), bt.clone(), Formula::not(bt), Formula::bot(), Formula::top()]
}

/// Sub*(A) and the constants, together with the companions of all of them.
/// Companions of the constants add ¬⊥ and ¬⊤, without which no subset could
/// contain B or ∼B for B = ⊥.
pub fn overline_closure(a: &Formula) -> FormulaSet {
    let mut base = sub_star(a);
    base.extend(constant_part());
    let mut out = base.clone();
    out.extend(base.iter().map(Formula::neg_companion));
    out
}

/// Arguments B of the boxed members □B of a set.
pub fn box_args(set: &FormulaSet) -> FormulaSet {
    set.iter().filter_map(|f| f.box_arg().cloned()).collect()
}

/// `g` closed `depth` times under □C ↦ ¬C, □¬C, and additionally □C ↦ □□C
/// for logics with the 4 axiom. Bounds the premises the provability check
/// may draw on.
pub fn premise_universe(l: Logic, g: &FormulaSet, depth: usize) -> FormulaSet {
    let mut out = g.clone();
    for _ in 0..depth {
        let boxes: Vec<Formula> = out.iter().filter(|f| f.is_box()).cloned().collect();
        for bx in boxes {
            let c = bx.box_arg().expect("box").clone();
            let nc = Formula::not(c);
            out.insert(Formula::boxed(nc.clone()));
            out.insert(nc);
            if l.has_four() {
                out.insert(Formula::boxed(bx));
            }
        }
    }
    out
}

/// The three closure sets of a formula, as reported by the `closure` command.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureSets {
    pub formula: Formula,
    pub sub: Vec<Formula>,
    #[serde(rename = "subStar")]
    pub sub_star: Vec<Formula>,
    pub closure: Vec<Formula>,
}

impl ClosureSets {
    pub fn of(a: &Formula) -> ClosureSets {
        ClosureSets {
            formula: a.clone(),
            sub: sub(a).into_iter().collect(),
            sub_star: sub_star(a).into_iter().collect(),
            closure: overline_closure(a).into_iter().collect(),
        }
    }
}
