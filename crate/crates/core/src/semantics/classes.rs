//! Frame-class membership. Conditions quantified over all indices are decided
//! by checking every explicit index concretely and every family of
//! policy-resolved indices by a policy-level argument; the failing index
//! reported for a family is a concrete representative of it.

use super::{DefaultPolicy, FrameSpec, Resolved, SemanticsError, WorldId};
use crate::closure::FormulaSet;
use crate::formula::{Formula, Kind};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameClass {
    /// Every frame.
    N,
    /// Every world has a ≺_⊥-successor.
    NP,
    /// ≺_A and ≺_¬A share a successor at every world, for every A.
    ND,
    /// Every relation is serial.
    Serial,
    /// x ≺_□C y and y ≺_C z imply x ≺_C z, for every C.
    Transitive,
    /// The transitivity condition for the C with □□C ∈ Γ.
    GammaTransitive(FormulaSet),
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameClass::N => f.write_str("N"),
            FrameClass::NP => f.write_str("NP"),
            FrameClass::ND => f.write_str("ND"),
            FrameClass::Serial => f.write_str("serial"),
            FrameClass::Transitive => f.write_str("transitive"),
            FrameClass::GammaTransitive(_) => f.write_str("gamma-transitive"),
        }
    }
}

/// Why a frame falls outside a class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Witness {
    /// World without ≺_⊥-successor.
    NoBottomSuccessor { world: WorldId },
    /// ≺_index and ≺_¬index have no common successor at `world`.
    NoCommonSuccessor { index: Formula, world: WorldId },
    /// ≺_index has no successor at `world`.
    NotSerial { index: Formula, world: WorldId },
    /// x ≺_□index y, y ≺_index z but not x ≺_index z.
    NotTransitive { index: Formula, x: WorldId, y: WorldId, z: WorldId },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCheck {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl ClassCheck {
    fn ok() -> ClassCheck {
        ClassCheck { holds: true, witness: None }
    }

    fn fail(w: Witness) -> ClassCheck {
        ClassCheck { holds: false, witness: Some(w) }
    }
}

pub fn check_frame_class(frame: &FrameSpec, class: &FrameClass) -> Result<ClassCheck, SemanticsError> {
    match class {
        FrameClass::N => Ok(ClassCheck::ok()),
        FrameClass::NP => Ok(check_np(frame)),
        FrameClass::ND => {
            reject_empty_policies(frame, class)?;
            Ok(check_nd(frame))
        }
        FrameClass::Serial => {
            reject_empty_policies(frame, class)?;
            Ok(check_serial(frame))
        }
        FrameClass::Transitive => {
            reject_empty_policies(frame, class)?;
            Ok(check_transitive(frame))
        }
        FrameClass::GammaTransitive(gamma) => {
            for f in gamma {
                if let Some(c) = f.box_arg().and_then(Formula::box_arg) {
                    if let Some(w) = transitivity_failure(frame, c) {
                        return Ok(ClassCheck::fail(w));
                    }
                }
            }
            Ok(ClassCheck::ok())
        }
    }
}

fn reject_empty_policies(frame: &FrameSpec, class: &FrameClass) -> Result<(), SemanticsError> {
    let empty = frame.default_policy() == DefaultPolicy::Empty
        || frame.negation_defaults().values().any(|&p| p == DefaultPolicy::Empty);
    if empty {
        return Err(SemanticsError::UndecidableConfiguration(format!(
            "an empty default policy cannot be combined with the {class} class"
        )));
    }
    Ok(())
}

fn check_np(frame: &FrameSpec) -> ClassCheck {
    let n = frame.len();
    let r = frame.resolve(&Formula::bot());
    for x in 0..n {
        if r.successors(n, x).is_empty() {
            return ClassCheck::fail(Witness::NoBottomSuccessor { world: frame.world(x) });
        }
    }
    ClassCheck::ok()
}

// A variable name not occurring in any explicit index or chain base.
fn fresh_var(frame: &FrameSpec) -> Formula {
    let used = |name: &str| {
        let v = Formula::var(name);
        frame.explicit().keys().chain(frame.negation_defaults().keys()).any(|f| f.vars().contains(&v))
    };
    (0..).map(|i| format!("fresh{i}")).find(|s| !used(s)).map(|s| Formula::var(&s)).expect("unbounded")
}

// The chain ¬⁰base, ¬¹base, … up to the least k ≥ 1 from which on every member
// (and its box, if asked) is policy-resolved by the same override; deeper
// members all behave like the last one.
fn chain_members(frame: &FrameSpec, base: &Formula, also_boxed: bool) -> Vec<Formula> {
    let free = |x: &Formula| !frame.explicit().contains_key(x) && !frame.negation_defaults().contains_key(x);
    let mut out = vec![base.clone()];
    loop {
        let f = Formula::not(out.last().expect("nonempty").clone());
        let done = out.len() > 1
            && free(&f)
            && free(&Formula::not(f.clone()))
            && (!also_boxed || free(&Formula::boxed(f.clone())));
        out.push(f);
        if done {
            return out;
        }
    }
}

fn common_successor_failure(frame: &FrameSpec, b: &Formula) -> Option<Witness> {
    let n = frame.len();
    let nb = Formula::not(b.clone());
    let (r1, r2) = (frame.resolve(b), frame.resolve(&nb));
    (0..n)
        .find(|&x| !r1.successors(n, x).intersects(&r2.successors(n, x)))
        .map(|x| Witness::NoCommonSuccessor { index: b.clone(), world: frame.world(x) })
}

fn check_nd(frame: &FrameSpec) -> ClassCheck {
    let mut pairs: Vec<Formula> = Vec::new();
    for e in frame.explicit().keys() {
        pairs.push(e.clone());
        if let Kind::Not(inner) = e.kind() {
            pairs.push(inner.clone());
        }
    }
    // Families of policy-resolved pairs: fresh atoms, and chain members.
    pairs.push(fresh_var(frame));
    for base in frame.negation_defaults().keys() {
        pairs.extend(chain_members(frame, base, false));
    }
    pairs.sort();
    pairs.dedup();
    for b in &pairs {
        if let Some(w) = common_successor_failure(frame, b) {
            return ClassCheck::fail(w);
        }
    }
    ClassCheck::ok()
}

fn check_serial(frame: &FrameSpec) -> ClassCheck {
    let n = frame.len();
    let mut indices: Vec<Formula> = frame.explicit().keys().cloned().collect();
    indices.push(fresh_var(frame));
    for base in frame.negation_defaults().keys() {
        indices.extend(chain_members(frame, base, false));
    }
    for b in &indices {
        let r = frame.resolve(b);
        if let Some(x) = (0..n).find(|&x| r.successors(n, x).is_empty()) {
            return ClassCheck::fail(Witness::NotSerial { index: b.clone(), world: frame.world(x) });
        }
    }
    ClassCheck::ok()
}

/// Checks the transitivity condition for the single index `c`.
pub(crate) fn transitivity_failure(frame: &FrameSpec, c: &Formula) -> Option<Witness> {
    let n = frame.len();
    let outer = frame.resolve(&Formula::boxed(c.clone()));
    let inner = frame.resolve(c);
    if let Resolved::Policy(DefaultPolicy::Identity | DefaultPolicy::Empty) = outer {
        return None;
    }
    let inner_rel = inner.materialize(n);
    for x in 0..n {
        let row_x = inner_rel.row(x);
        for y in outer.successors(n, x).iter() {
            let row_y = inner_rel.row(y);
            if !row_y.is_subset(row_x) {
                let z = row_y.complement_within(row_x);
                return Some(Witness::NotTransitive {
                    index: c.clone(),
                    x: frame.world(x),
                    y: frame.world(y),
                    z: frame.world(z),
                });
            }
        }
    }
    None
}

fn check_transitive(frame: &FrameSpec) -> ClassCheck {
    let mut indices: Vec<Formula> = Vec::new();
    for e in frame.explicit().keys() {
        indices.push(e.clone());
        if let Some(c) = e.box_arg() {
            indices.push(c.clone());
        }
    }
    indices.push(fresh_var(frame));
    for base in frame.negation_defaults().keys() {
        indices.extend(chain_members(frame, base, true));
    }
    indices.sort();
    indices.dedup();
    for c in &indices {
        if let Some(w) = transitivity_failure(frame, c) {
            return ClassCheck::fail(w);
        }
    }
    ClassCheck::ok()
}

impl super::WorldSet {
    // Some member of self that is not in other; callers guarantee one exists.
    fn complement_within(&self, other: &super::WorldSet) -> usize {
        self.iter().find(|&i| !other.contains(i)).expect("self is not a subset of other")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::semantics::Relation;

    fn frame(n: u64, default: DefaultPolicy) -> FrameSpec {
        FrameSpec::new((0..n).collect(), default).unwrap()
    }

    #[test]
    fn empty_bottom_relation_fails_np() {
        let mut f = frame(2, DefaultPolicy::Identity);
        f.set_relation(Formula::bot(), Relation::empty(2));
        let c = check_frame_class(&f, &FrameClass::NP).unwrap();
        assert_eq!(c, ClassCheck::fail(Witness::NoBottomSuccessor { world: 0 }));
        f.add_edge(&Formula::bot(), 0, 1).unwrap();
        f.add_edge(&Formula::bot(), 1, 1).unwrap();
        assert!(check_frame_class(&f, &FrameClass::NP).unwrap().holds);
    }

    #[test]
    fn nd_needs_common_successors_against_defaults() {
        // ≺_p = {(0,1),(1,1)} with ≺_¬p the identity: world 0 has no common successor.
        let mut f = frame(2, DefaultPolicy::Identity);
        f.add_edge(&parse("p"), 0, 1).unwrap();
        f.add_edge(&parse("p"), 1, 1).unwrap();
        let c = check_frame_class(&f, &FrameClass::ND).unwrap();
        assert_eq!(c.witness, Some(Witness::NoCommonSuccessor { index: parse("p"), world: 0 }));
        f.add_edge(&parse("p"), 0, 0).unwrap();
        assert!(check_frame_class(&f, &FrameClass::ND).unwrap().holds);
        // Making ¬p explicit leaves world 1 without ¬p-successors.
        f.add_edge(&parse("~p"), 0, 1).unwrap();
        let c = check_frame_class(&f, &FrameClass::ND).unwrap();
        assert_eq!(c.witness, Some(Witness::NoCommonSuccessor { index: parse("p"), world: 1 }));
        // Fixing that still clashes with the identity on ¬¬p at world 0.
        f.add_edge(&parse("~p"), 1, 1).unwrap();
        let c = check_frame_class(&f, &FrameClass::ND).unwrap();
        assert_eq!(c.witness, Some(Witness::NoCommonSuccessor { index: parse("~p"), world: 0 }));
    }

    #[test]
    fn transitivity_witness_example() {
        let mut f = frame(3, DefaultPolicy::Identity);
        f.add_edge(&parse("[]p"), 0, 1).unwrap();
        f.add_edge(&parse("p"), 1, 2).unwrap();
        let c = check_frame_class(&f, &FrameClass::Transitive).unwrap();
        assert_eq!(c.witness, Some(Witness::NotTransitive { index: parse("p"), x: 0, y: 1, z: 2 }));
        f.add_edge(&parse("p"), 0, 2).unwrap();
        assert!(check_frame_class(&f, &FrameClass::Transitive).unwrap().holds);
    }

    #[test]
    fn total_default_is_transitive_but_identity_chain_under_total_is_not() {
        let f = frame(2, DefaultPolicy::Total);
        assert!(check_frame_class(&f, &FrameClass::Transitive).unwrap().holds);
        let mut g = frame(2, DefaultPolicy::Total);
        g.set_negation_default(parse("q"), DefaultPolicy::Identity);
        let c = check_frame_class(&g, &FrameClass::Transitive).unwrap();
        assert!(!c.holds);
    }

    #[test]
    fn empty_default_is_an_undecidable_configuration() {
        let f = frame(1, DefaultPolicy::Empty);
        for class in [FrameClass::ND, FrameClass::Serial, FrameClass::Transitive] {
            assert!(matches!(check_frame_class(&f, &class), Err(SemanticsError::UndecidableConfiguration(_))));
        }
        assert!(!check_frame_class(&f, &FrameClass::NP).unwrap().holds);
    }

    #[test]
    fn serial_and_gamma_transitive() {
        let mut f = frame(2, DefaultPolicy::Identity);
        f.set_relation(parse("p"), Relation::empty(2));
        assert_eq!(
            check_frame_class(&f, &FrameClass::Serial).unwrap().witness,
            Some(Witness::NotSerial { index: parse("p"), world: 0 })
        );
        let mut g = frame(3, DefaultPolicy::Identity);
        g.add_edge(&parse("[]q"), 0, 1).unwrap();
        g.add_edge(&parse("q"), 1, 2).unwrap();
        let gamma: FormulaSet = [parse("[][]p")].into_iter().collect();
        assert!(check_frame_class(&g, &FrameClass::GammaTransitive(gamma)).unwrap().holds);
        let gamma: FormulaSet = [parse("[][]q")].into_iter().collect();
        assert!(!check_frame_class(&g, &FrameClass::GammaTransitive(gamma)).unwrap().holds);
    }
}
