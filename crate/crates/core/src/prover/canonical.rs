//! The finite canonical model over the closure of a formula and the decision
//! procedure built on it.

use super::{verify_certificate, Prover, ProverError, Stats, Verdict};
use crate::closure::overline_closure;
use crate::formula::{Formula, Kind};
use crate::logic::Logic;
use crate::prop::{atoms_of, eval, Encoder};
use crate::sat::Lit;
use crate::semantics::{
    check_frame_class, repair_transitive, DefaultPolicy, Evaluator, FrameSpec, Model, Relation, SemanticsError,
    WorldId, WorldSet,
};
use std::collections::{BTreeSet, HashMap};

/// Worlds are the maximal consistent subsets of the closure; world `i` has
/// id `i`.
#[derive(Clone, Debug)]
pub struct CanonicalModel {
    /// The closure, in Gödel-number order.
    pub closure: Vec<Formula>,
    /// `members[x][j]`: whether `closure[j]` belongs to world x.
    pub members: Vec<Vec<bool>>,
    pub model: Model,
    index: HashMap<Formula, usize>,
}

impl CanonicalModel {
    pub fn contains(&self, x: usize, f: &Formula) -> bool {
        self.index.get(f).is_some_and(|&j| self.members[x][j])
    }

    pub fn member_set(&self, x: usize) -> BTreeSet<Formula> {
        self.closure.iter().zip(&self.members[x]).filter(|(_, &m)| m).map(|(f, _)| f.clone()).collect()
    }

    /// Closure formulas whose truth set in `model` differs from their
    /// membership pattern.
    pub fn truth_lemma_failures(&self, model: &Model) -> Vec<(Formula, usize)> {
        let mut ev = Evaluator::new(model);
        let mut out = Vec::new();
        for (j, f) in self.closure.iter().enumerate() {
            let t = ev.truth_set(f);
            for x in 0..self.members.len() {
                if t.contains(x) != self.members[x][j] {
                    out.push((f.clone(), x));
                }
            }
        }
        out
    }
}

/// All maximal consistent subsets of the closure of `a`, as membership
/// vectors over the closure (Gödel-number order). A subset is consistent when
/// it is jointly satisfiable with the premises available to `a`; it is fixed
/// by the truth values of the closure's atoms, which are enumerated
/// depth-first in Gödel-number order, false before true.
pub fn max_cons_sets(prover: &Prover, a: &Formula) -> (Vec<Formula>, Vec<Vec<bool>>) {
    let closure: Vec<Formula> = overline_closure(a).into_iter().collect();
    let mut atoms = Vec::new();
    for f in &closure {
        atoms_of(f, &mut atoms);
    }
    atoms.sort();
    let mut enc = Encoder::new();
    for (p, _) in prover.premises(a) {
        enc.assert(&p);
    }
    let lits: Vec<Lit> = atoms.iter().map(|at| enc.lit(at)).collect();
    let mut assignments = Vec::new();
    let mut assumptions = Vec::with_capacity(lits.len());
    enumerate(&mut enc, &lits, &mut assumptions, &mut assignments);
    let members = assignments
        .into_iter()
        .map(|bits: Vec<bool>| {
            let val: HashMap<&Formula, bool> = atoms.iter().zip(bits).collect();
            closure.iter().map(|f| eval(f, &mut |at| val[at])).collect()
        })
        .collect();
    (closure, members)
}

fn enumerate(enc: &mut Encoder<Formula>, lits: &[Lit], assumptions: &mut Vec<Lit>, out: &mut Vec<Vec<bool>>) {
    let i = assumptions.len();
    if i == lits.len() {
        out.push(assumptions.iter().map(|l| l.is_positive()).collect());
        return;
    }
    for l in [!lits[i], lits[i]] {
        assumptions.push(l);
        if enc.satisfiable_with(assumptions) {
            enumerate(enc, lits, assumptions, out);
        }
        assumptions.pop();
    }
}

/// The canonical model before any repair: x ≺_B y iff □B ∉ x or B ∈ y for
/// the B with □B in the closure, every other relation total.
pub fn build_canonical_model(prover: &Prover, a: &Formula) -> Result<CanonicalModel, ProverError> {
    let (closure, members) = max_cons_sets(prover, a);
    let n = members.len();
    if n == 0 {
        return Err(ProverError::InternalCompleteness(format!(
            "no maximal {}-consistent subset of the closure of {a}",
            prover.logic()
        )));
    }
    let index: HashMap<Formula, usize> = closure.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    let mut frame = FrameSpec::new((0..n as WorldId).collect(), DefaultPolicy::Total)?;
    for (j, bx) in closure.iter().enumerate() {
        let Some(b) = bx.box_arg() else { continue };
        let jb = index[b];
        let targets: WorldSet = {
            let mut s = WorldSet::empty(n);
            (0..n).filter(|&y| members[y][jb]).for_each(|y| s.insert(y));
            s
        };
        let mut rel = Relation::empty(n);
        for (x, m) in members.iter().enumerate() {
            *rel.row_mut(x) = if m[j] { targets.clone() } else { WorldSet::full(n) };
        }
        frame.set_relation(b.clone(), rel);
    }
    let mut model = Model::new(frame);
    for (j, f) in closure.iter().enumerate() {
        if matches!(f.kind(), Kind::Var(_)) {
            let mut s = WorldSet::empty(n);
            (0..n).filter(|&x| members[x][j]).for_each(|x| s.insert(x));
            model.set_valuation(f.clone(), s);
        }
    }
    Ok(CanonicalModel { closure, members, model, index })
}

/// Frame-class membership for every class of `l`, and falsification of `a`
/// at `world`.
pub fn verify_countermodel(l: Logic, model: &Model, world: WorldId, a: &Formula) -> Result<bool, SemanticsError> {
    for c in l.frame_classes() {
        if !check_frame_class(&model.frame, &c)?.holds {
            return Ok(false);
        }
    }
    Ok(!model.forces(world, a)?)
}

/// A verified verdict for `a`.
pub fn decide(prover: &Prover, a: &Formula) -> Result<Verdict, ProverError> {
    let l = prover.logic();
    let mut stats = Stats { closure_size: overline_closure(a).len(), world_count: 0, oracle_depth: prover.depth() };
    if prover.lprovable(a) {
        let cert = prover
            .certificate(a)
            .ok_or_else(|| ProverError::InternalCompleteness(format!("no certificate for {a} in {l}")))?;
        if !verify_certificate(l, &cert) {
            return Err(ProverError::InternalCompleteness(format!("certificate for {a} in {l} does not verify")));
        }
        return Ok(Verdict::provable(l, a.clone(), cert, stats));
    }
    let canon = build_canonical_model(prover, a)?;
    let x = (0..canon.members.len()).find(|&x| !canon.contains(x, a)).ok_or_else(|| {
        ProverError::InternalCompleteness(format!("{a} is unprovable in {l} but lies in every maximal consistent set"))
    })?;
    let mut model = canon.model;
    if l.has_four() {
        model.frame = repair_transitive(&model.frame, a);
    }
    let world = x as WorldId;
    if !verify_countermodel(l, &model, world, a)? {
        return Err(ProverError::InternalCompleteness(format!("countermodel for {a} in {l} does not verify")));
    }
    stats.world_count = model.frame.len();
    Ok(Verdict::unprovable(l, a.clone(), &model, world, stats))
}
