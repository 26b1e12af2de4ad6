//! Finite N-frames and models.
//!
//! An N-frame carries one accessibility relation per formula index. Finitely
//! many indices get an explicit relation; every other index resolves to a
//! policy (identity, total or empty), either the frame-wide default or, for
//! indices of the shape ¬ᵏC (k ≥ 1), a per-chain override registered on C.

mod classes;
mod io;
mod random;
mod repair;

pub use classes::{check_frame_class, ClassCheck, FrameClass, Witness};
pub use io::{to_dot, ModelJson};
pub use random::{random_frame, random_frame_for, random_model, RandomFrameConfig};
pub use repair::repair_transitive;

use crate::formula::{Formula, Kind};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

pub type WorldId = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("unknown world {0}")]
    UnknownWorld(WorldId),
    #[error("a frame needs at least one world")]
    NoWorlds,
    #[error("duplicate world {0}")]
    DuplicateWorld(WorldId),
    #[error("undecidable configuration: {0}")]
    UndecidableConfiguration(String),
    #[error("malformed frame description: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DefaultPolicy {
    Identity,
    Total,
    Empty,
}

/// A set of worlds, as a bitset over world positions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WorldSet {
    n: usize,
    bits: Vec<u64>,
}

impl WorldSet {
    pub fn empty(n: usize) -> WorldSet {
        WorldSet { n, bits: vec![0; n.div_ceil(64)] }
    }

    pub fn full(n: usize) -> WorldSet {
        let mut s = WorldSet::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn singleton(n: usize, i: usize) -> WorldSet {
        let mut s = WorldSet::empty(n);
        s.insert(i);
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.bits[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        (self.bits[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &WorldSet) -> bool {
        self.bits.iter().zip(&other.bits).any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &WorldSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &WorldSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
    }

    pub fn complement(&self) -> WorldSet {
        let mut out = WorldSet::full(self.n);
        for (a, b) in out.bits.iter_mut().zip(&self.bits) {
            *a &= !b;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

/// A binary relation over world positions, stored row-wise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    rows: Vec<WorldSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Relation {
        Relation { rows: vec![WorldSet::empty(n); n] }
    }

    pub fn from_policy(n: usize, p: DefaultPolicy) -> Relation {
        match p {
            DefaultPolicy::Empty => Relation::empty(n),
            DefaultPolicy::Total => Relation { rows: vec![WorldSet::full(n); n] },
            DefaultPolicy::Identity => Relation { rows: (0..n).map(|i| WorldSet::singleton(n, i)).collect() },
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, x: usize) -> &WorldSet {
        &self.rows[x]
    }

    pub fn row_mut(&mut self, x: usize) -> &mut WorldSet {
        &mut self.rows[x]
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x].insert(y);
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(x, r)| r.iter().map(move |y| (x, y)))
    }
}

/// How an index resolves in a frame.
#[derive(Clone, Copy, Debug)]
pub enum Resolved<'a> {
    Explicit(&'a Relation),
    Policy(DefaultPolicy),
}

impl Resolved<'_> {
    pub fn materialize(&self, n: usize) -> Relation {
        match self {
            Resolved::Explicit(r) => (*r).clone(),
            Resolved::Policy(p) => Relation::from_policy(n, *p),
        }
    }

    pub fn successors(&self, n: usize, x: usize) -> WorldSet {
        match self {
            Resolved::Explicit(r) => r.row(x).clone(),
            Resolved::Policy(DefaultPolicy::Identity) => WorldSet::singleton(n, x),
            Resolved::Policy(DefaultPolicy::Total) => WorldSet::full(n),
            Resolved::Policy(DefaultPolicy::Empty) => WorldSet::empty(n),
        }
    }
}

/// A finite N-frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameSpec {
    worlds: Vec<WorldId>,
    position: HashMap<WorldId, usize>,
    explicit: BTreeMap<Formula, Relation>,
    default: DefaultPolicy,
    negation_defaults: BTreeMap<Formula, DefaultPolicy>,
}

impl FrameSpec {
    /// A frame over the given worlds with no explicit relations.
    pub fn new(worlds: Vec<WorldId>, default: DefaultPolicy) -> Result<FrameSpec, SemanticsError> {
        if worlds.is_empty() {
            return Err(SemanticsError::NoWorlds);
        }
        let mut position = HashMap::new();
        for (i, &w) in worlds.iter().enumerate() {
            if position.insert(w, i).is_some() {
                return Err(SemanticsError::DuplicateWorld(w));
            }
        }
        Ok(FrameSpec { worlds, position, explicit: BTreeMap::new(), default, negation_defaults: BTreeMap::new() })
    }

    pub fn worlds(&self) -> &[WorldId] {
        &self.worlds
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn position(&self, w: WorldId) -> Result<usize, SemanticsError> {
        self.position.get(&w).copied().ok_or(SemanticsError::UnknownWorld(w))
    }

    pub fn world(&self, pos: usize) -> WorldId {
        self.worlds[pos]
    }

    pub fn default_policy(&self) -> DefaultPolicy {
        self.default
    }

    pub fn set_default(&mut self, p: DefaultPolicy) {
        self.default = p;
    }

    pub fn explicit(&self) -> &BTreeMap<Formula, Relation> {
        &self.explicit
    }

    pub fn negation_defaults(&self) -> &BTreeMap<Formula, DefaultPolicy> {
        &self.negation_defaults
    }

    pub fn set_negation_default(&mut self, base: Formula, p: DefaultPolicy) {
        self.negation_defaults.insert(base, p);
    }

    pub fn clear_negation_defaults(&mut self) {
        self.negation_defaults.clear();
    }

    pub fn set_relation(&mut self, index: Formula, rel: Relation) {
        assert_eq!(rel.size(), self.len(), "relation size must match the frame");
        self.explicit.insert(index, rel);
    }

    pub fn remove_relation(&mut self, index: &Formula) -> Option<Relation> {
        self.explicit.remove(index)
    }

    pub fn relation_mut(&mut self, index: &Formula) -> Option<&mut Relation> {
        self.explicit.get_mut(index)
    }

    /// Adds `(x, y)` (world ids) to the explicit relation of `index`, creating
    /// it empty if absent.
    pub fn add_edge(&mut self, index: &Formula, x: WorldId, y: WorldId) -> Result<(), SemanticsError> {
        let (px, py) = (self.position(x)?, self.position(y)?);
        let n = self.len();
        self.explicit.entry(index.clone()).or_insert_with(|| Relation::empty(n)).insert(px, py);
        Ok(())
    }

    /// The policy governing a non-explicit index.
    pub fn policy_for(&self, index: &Formula) -> DefaultPolicy {
        let mut cur = index;
        while let Kind::Not(inner) = cur.kind() {
            if let Some(&p) = self.negation_defaults.get(inner) {
                return p;
            }
            cur = inner;
        }
        self.default
    }

    pub fn resolve(&self, index: &Formula) -> Resolved<'_> {
        match self.explicit.get(index) {
            Some(r) => Resolved::Explicit(r),
            None => Resolved::Policy(self.policy_for(index)),
        }
    }

    /// Whether `x ≺_index y` (world ids).
    pub fn related(&self, index: &Formula, x: WorldId, y: WorldId) -> Result<bool, SemanticsError> {
        let (px, py) = (self.position(x)?, self.position(y)?);
        Ok(self.resolve(index).successors(self.len(), px).contains(py))
    }

    /// The same frame with the i-th world renamed to `ids[i]`.
    pub fn renumbered(&self, ids: &[WorldId]) -> Result<FrameSpec, SemanticsError> {
        assert_eq!(ids.len(), self.len());
        let mut out = FrameSpec::new(ids.to_vec(), self.default)?;
        out.explicit = self.explicit.clone();
        out.negation_defaults = self.negation_defaults.clone();
        Ok(out)
    }
}

/// A finite N-model: a frame plus a valuation.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub frame: FrameSpec,
    valuation: BTreeMap<Formula, WorldSet>,
}

impl Model {
    pub fn new(frame: FrameSpec) -> Model {
        Model { frame, valuation: BTreeMap::new() }
    }

    /// Makes variable `var` true exactly at `worlds` (positions).
    pub fn set_valuation(&mut self, var: Formula, worlds: WorldSet) {
        assert!(matches!(var.kind(), Kind::Var(_)), "valuations assign variables");
        self.valuation.insert(var, worlds);
    }

    pub fn set_true(&mut self, var: &Formula, w: WorldId) -> Result<(), SemanticsError> {
        let p = self.frame.position(w)?;
        let n = self.frame.len();
        self.valuation.entry(var.clone()).or_insert_with(|| WorldSet::empty(n)).insert(p);
        Ok(())
    }

    pub fn valuation(&self) -> &BTreeMap<Formula, WorldSet> {
        &self.valuation
    }

    pub fn truth_of_var(&self, var: &Formula) -> WorldSet {
        self.valuation.get(var).cloned().unwrap_or_else(|| WorldSet::empty(self.frame.len()))
    }

    /// x ⊩ a.
    pub fn forces(&self, w: WorldId, a: &Formula) -> Result<bool, SemanticsError> {
        let p = self.frame.position(w)?;
        Ok(Evaluator::new(self).truth_set(a).contains(p))
    }

    /// Whether `a` holds at every world.
    pub fn valid(&self, a: &Formula) -> bool {
        let t = Evaluator::new(self).truth_set(a);
        t.len() == self.frame.len()
    }
}

/// Bottom-up truth-set computation with a per-model cache.
pub struct Evaluator<'m> {
    model: &'m Model,
    cache: HashMap<Formula, WorldSet>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model) -> Self {
        Evaluator { model, cache: HashMap::new() }
    }

    pub fn forces(&mut self, pos: usize, a: &Formula) -> bool {
        self.truth_set(a).contains(pos)
    }

    /// The positions of the worlds forcing `a`.
    pub fn truth_set(&mut self, a: &Formula) -> WorldSet {
        if let Some(s) = self.cache.get(a) {
            return s.clone();
        }
        let n = self.model.frame.len();
        let s = match a.kind() {
            Kind::Bot => WorldSet::empty(n),
            Kind::Top => WorldSet::full(n),
            Kind::Var(_) => self.model.truth_of_var(a),
            Kind::Not(b) => self.truth_set(b).complement(),
            Kind::And(b, c) => {
                let mut s = self.truth_set(b);
                s.intersect_with(&self.truth_set(c));
                s
            }
            Kind::Or(b, c) => {
                let mut s = self.truth_set(b);
                s.union_with(&self.truth_set(c));
                s
            }
            Kind::Imp(b, c) => {
                let mut s = self.truth_set(b).complement();
                s.union_with(&self.truth_set(c));
                s
            }
            Kind::Box(b) => {
                let tb = self.truth_set(b);
                match self.model.frame.resolve(b) {
                    Resolved::Explicit(r) => {
                        let mut s = WorldSet::empty(n);
                        for x in 0..n {
                            if r.row(x).is_subset(&tb) {
                                s.insert(x);
                            }
                        }
                        s
                    }
                    Resolved::Policy(DefaultPolicy::Identity) => tb,
                    Resolved::Policy(DefaultPolicy::Total) => {
                        if tb.len() == n {
                            WorldSet::full(n)
                        } else {
                            WorldSet::empty(n)
                        }
                    }
                    Resolved::Policy(DefaultPolicy::Empty) => WorldSet::full(n),
                }
            }
        };
        self.cache.insert(a.clone(), s.clone());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn two_worlds() -> Model {
        let mut f = FrameSpec::new(vec![0, 1], DefaultPolicy::Identity).unwrap();
        f.add_edge(&parse("p"), 0, 1).unwrap();
        let mut m = Model::new(f);
        m.set_true(&parse("p"), 1).unwrap();
        m
    }

    #[test]
    fn box_uses_the_relation_of_its_argument() {
        let m = two_worlds();
        assert!(m.forces(0, &parse("[]p")).unwrap());
        // ≺_p from world 1 is empty: vacuous.
        assert!(m.forces(1, &parse("[]p")).unwrap());
        // ≺_{p∧p} is the identity default.
        assert!(!m.forces(0, &parse("[](p & p)")).unwrap());
        assert!(m.forces(1, &parse("[](p & p)")).unwrap());
        assert!(!m.forces(0, &parse("p")).unwrap());
        assert_eq!(m.forces(7, &parse("p")), Err(SemanticsError::UnknownWorld(7)));
    }

    #[test]
    fn policies_resolve_through_negation_chains() {
        let mut f = FrameSpec::new(vec![0, 1], DefaultPolicy::Identity).unwrap();
        f.set_negation_default(parse("q"), DefaultPolicy::Total);
        assert_eq!(f.policy_for(&parse("q")), DefaultPolicy::Identity);
        assert_eq!(f.policy_for(&parse("~q")), DefaultPolicy::Total);
        assert_eq!(f.policy_for(&parse("~~~q")), DefaultPolicy::Total);
        assert_eq!(f.policy_for(&parse("~r")), DefaultPolicy::Identity);
        assert!(f.related(&parse("~~q"), 0, 1).unwrap());
        assert!(!f.related(&parse("~~r"), 0, 1).unwrap());
    }

    #[test]
    fn box_top_is_always_forced() {
        let m = two_worlds();
        for w in [0, 1] {
            assert!(m.forces(w, &parse("[]true")).unwrap());
        }
    }
}
