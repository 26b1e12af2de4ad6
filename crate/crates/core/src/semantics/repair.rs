//! Transitivity repair of a frame relative to a formula A.
//!
//! The relation of index B is kept when □B ∈ Sub*(A), or when B ≡ ¬ᵏC with
//! k > 0 and □C ∈ Sub(A); every other index becomes the identity. Forcing of
//! the members of Sub(A) is unaffected, since only indices B with □B ∈ Sub(A)
//! matter to them.

use super::{DefaultPolicy, FrameSpec};
use crate::closure::{sub, sub_star, FormulaSet};
use crate::formula::Formula;

fn kept(b: &Formula, sub_a: &FormulaSet, star: &FormulaSet) -> bool {
    if star.contains(&Formula::boxed(b.clone())) {
        return true;
    }
    let mut cur = b;
    while let Some(inner) = cur.not_arg() {
        if sub_a.contains(&Formula::boxed(inner.clone())) {
            return true;
        }
        cur = inner;
    }
    false
}

// Whether some ¬ʲC (j ≥ 0) equals `base` for a C with □C ∈ Sub(A).
fn base_in_kept_chain(base: &Formula, sub_a: &FormulaSet) -> bool {
    let mut cur = base;
    loop {
        if sub_a.contains(&Formula::boxed(cur.clone())) {
            return true;
        }
        match cur.not_arg() {
            Some(inner) => cur = inner,
            None => return false,
        }
    }
}

pub fn repair_transitive(frame: &FrameSpec, a: &Formula) -> FrameSpec {
    let sub_a = sub(a);
    let star = sub_star(a);
    let mut out = frame.clone();
    let dropped: Vec<Formula> = frame.explicit().keys().filter(|b| !kept(b, &sub_a, &star)).cloned().collect();
    for b in dropped {
        out.remove_relation(&b);
    }
    // Policy-resolved members ¬ᵏC (k > 0) of kept chains keep the relation
    // they had, which was governed by the old default unless a chain override
    // lower in the same chain applies.
    let old_default = frame.default_policy();
    let mut chains = std::collections::BTreeMap::new();
    for (base, &p) in frame.negation_defaults() {
        if base_in_kept_chain(base, &sub_a) {
            chains.insert(base.clone(), p);
        }
    }
    for c in sub_a.iter().filter_map(Formula::box_arg) {
        chains.entry(c.clone()).or_insert(old_default);
    }
    out.clear_negation_defaults();
    for (base, p) in chains {
        out.set_negation_default(base, p);
    }
    out.set_default(DefaultPolicy::Identity);
    out
}
