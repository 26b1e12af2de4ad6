//! An independent oracle, used to cross-check `decide`: forward saturation
//! of a theorem set over a pool of formulas around the query, and a SAT-based
//! search for small countermodels.

use super::canonical::verify_countermodel;
use crate::closure::{box_args, sub, FormulaSet};
use crate::formula::{Formula, Kind};
use crate::logic::{Logic, Schema};
use crate::prop::{is_tautology, Encoder};
use crate::sat::{Lit, Solver};
use crate::semantics::{DefaultPolicy, FrameSpec, Model, Relation, WorldId, WorldSet};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleVerdict {
    Provable,
    Unprovable,
    Unknown,
}

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    /// Rounds of ¬/□ applications extending Sub(A) ∪ {⊥, ⊤} to the pool.
    pub pool_depth: usize,
    /// Largest countermodel tried.
    pub max_worlds: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { pool_depth: 2, max_worlds: 4 }
    }
}

pub fn saturation_oracle(l: Logic, a: &Formula, cfg: OracleConfig) -> OracleVerdict {
    if is_tautology(a) {
        return OracleVerdict::Provable;
    }
    if find_countermodel(l, a, 1).is_some() {
        return OracleVerdict::Unprovable;
    }
    if saturate(l, a, cfg.pool_depth) {
        return OracleVerdict::Provable;
    }
    for m in 2..=cfg.max_worlds {
        if find_countermodel(l, a, m).is_some() {
            return OracleVerdict::Unprovable;
        }
    }
    OracleVerdict::Unknown
}

fn pool(a: &Formula, depth: usize) -> FormulaSet {
    let mut out = sub(a);
    out.insert(Formula::bot());
    out.insert(Formula::top());
    let mut frontier: Vec<Formula> = out.iter().cloned().collect();
    for _ in 0..depth {
        let mut next = Vec::new();
        for f in frontier {
            for g in [Formula::not(f.clone()), Formula::boxed(f)] {
                if out.insert(g.clone()) {
                    next.push(g);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Whether `a` lies in the least set of pool formulas closed under
/// tautological consequence from the axiom instances in the pool and □C for
/// derived C.
fn saturate(l: Logic, a: &Formula, depth: usize) -> bool {
    let pool = pool(a, depth);
    let mut enc = Encoder::new();
    for bx in pool.iter().filter(|f| f.is_box()) {
        let c = bx.box_arg().expect("box");
        if l.has_p() && c == &Formula::bot() {
            enc.assert(&Schema::P.instance(c));
        }
        if l.has_d() && pool.contains(&Formula::boxed(Formula::not(c.clone()))) {
            enc.assert(&Schema::D.instance(c));
        }
        if l.has_four() && pool.contains(&Formula::boxed(bx.clone())) {
            enc.assert(&Schema::Four.instance(c));
        }
    }
    let mut open: Vec<Formula> = box_args(&pool).into_iter().collect();
    loop {
        let before = open.len();
        let mut still = Vec::with_capacity(open.len());
        for c in open {
            if enc.entails(&c) {
                enc.assert(&Formula::boxed(c));
            } else {
                still.push(c);
            }
        }
        open = still;
        if open.len() == before {
            break;
        }
    }
    enc.entails(a)
}

/// Encodes "some frame on `m` worlds with explicit relations for the box
/// arguments of A (for ND also their negation chains; identity elsewhere)
/// lies in the class of `l` and refutes A at world 0".
struct Search {
    s: Solver,
    m: usize,
    truth: Lit,
    rel: BTreeMap<Formula, Vec<Lit>>,
    vars: BTreeMap<Formula, Vec<Lit>>,
    memo: HashMap<(Formula, usize), Lit>,
}

impl Search {
    fn fresh(&mut self) -> Lit {
        Lit::pos(self.s.new_var())
    }

    fn r(&self, b: &Formula, x: usize, y: usize) -> Lit {
        self.rel[b][x * self.m + y]
    }

    fn lit(&mut self, f: &Formula, x: usize) -> Lit {
        if let Some(&l) = self.memo.get(&(f.clone(), x)) {
            return l;
        }
        let l = match f.kind() {
            Kind::Bot => !self.truth,
            Kind::Top => self.truth,
            Kind::Var(_) => {
                if !self.vars.contains_key(f) {
                    let ls: Vec<Lit> = (0..self.m).map(|_| Lit::pos(self.s.new_var())).collect();
                    self.vars.insert(f.clone(), ls);
                }
                self.vars[f][x]
            }
            Kind::Not(b) => !self.lit(b, x),
            Kind::And(b, c) | Kind::Or(b, c) | Kind::Imp(b, c) => {
                let (p, q) = (self.lit(b, x), self.lit(c, x));
                let p = if matches!(f.kind(), Kind::Imp(..)) { !p } else { p };
                let z = self.fresh();
                if matches!(f.kind(), Kind::And(..)) {
                    self.s.add_clause(&[!z, p]);
                    self.s.add_clause(&[!z, q]);
                    self.s.add_clause(&[z, !p, !q]);
                } else {
                    self.s.add_clause(&[z, !p]);
                    self.s.add_clause(&[z, !q]);
                    self.s.add_clause(&[!z, p, q]);
                }
                z
            }
            Kind::Box(b) => {
                let z = self.fresh();
                let mut some = vec![z];
                for y in 0..self.m {
                    let (r, t) = (self.r(b, x, y), self.lit(b, y));
                    self.s.add_clause(&[!z, !r, t]);
                    let u = self.fresh();
                    self.s.add_clause(&[!u, r]);
                    self.s.add_clause(&[!u, !t]);
                    some.push(u);
                }
                self.s.add_clause(&some);
                z
            }
        };
        self.memo.insert((f.clone(), x), l);
        l
    }
}

/// A verified countermodel to `a` in `l` with exactly `m` worlds, if the
/// restricted search finds one.
pub fn find_countermodel(l: Logic, a: &Formula, m: usize) -> Option<(Model, WorldId)> {
    let mut indices: BTreeSet<Formula> = box_args(&sub(a)).into_iter().collect();
    if l.has_d() {
        // Whole negation chains up to one step past each index, so that only
        // the outermost member is paired with an identity relation.
        let mut extra = Vec::new();
        for b in &indices {
            let (k, base) = b.strip_negations();
            extra.extend((0..=k + 1).map(|j| base.iterated_neg(j)));
        }
        indices.extend(extra);
    }
    let mut solver = Solver::new();
    let truth = Lit::pos(solver.new_var());
    solver.add_clause(&[truth]);
    let mut rel = BTreeMap::new();
    for b in &indices {
        rel.insert(b.clone(), (0..m * m).map(|_| Lit::pos(solver.new_var())).collect::<Vec<_>>());
    }
    let mut s = Search { s: solver, m, truth, rel, vars: BTreeMap::new(), memo: HashMap::new() };

    let bot = Formula::bot();
    if l.has_p() && indices.contains(&bot) {
        for x in 0..m {
            let row: Vec<Lit> = (0..m).map(|y| s.r(&bot, x, y)).collect();
            s.s.add_clause(&row);
        }
    }
    if l.has_d() {
        let mut pairs = BTreeSet::new();
        for b in &indices {
            pairs.insert(b.clone());
            if let Some(c) = b.not_arg() {
                pairs.insert(c.clone());
            }
        }
        for c in pairs {
            let nc = Formula::not(c.clone());
            match (indices.contains(&c), indices.contains(&nc)) {
                (true, true) => {
                    for x in 0..m {
                        let mut some = Vec::new();
                        for y in 0..m {
                            let u = s.fresh();
                            let (p, q) = (s.r(&c, x, y), s.r(&nc, x, y));
                            s.s.add_clause(&[!u, p]);
                            s.s.add_clause(&[!u, q]);
                            some.push(u);
                        }
                        s.s.add_clause(&some);
                    }
                }
                (true, false) | (false, true) => {
                    let e = if indices.contains(&c) { &c } else { &nc };
                    for x in 0..m {
                        let l = s.r(e, x, x);
                        s.s.add_clause(&[l]);
                    }
                }
                (false, false) => {}
            }
        }
    }
    if l.has_four() {
        let boxed: Vec<Formula> = indices.iter().filter(|b| b.is_box()).cloned().collect();
        for bc in boxed {
            let c = bc.box_arg().expect("box").clone();
            for x in 0..m {
                for y in 0..m {
                    let o = s.r(&bc, x, y);
                    if indices.contains(&c) {
                        for z in 0..m {
                            let (i, t) = (s.r(&c, y, z), s.r(&c, x, z));
                            s.s.add_clause(&[!o, !i, t]);
                        }
                    } else if x != y {
                        s.s.add_clause(&[!o]);
                    }
                }
            }
        }
    }
    let goal = s.lit(a, 0);
    s.s.add_clause(&[!goal]);
    if !s.s.solve() {
        return None;
    }

    let mut frame = FrameSpec::new((0..m as WorldId).collect(), DefaultPolicy::Identity).expect("nonempty");
    for (b, lits) in &s.rel {
        let mut r = Relation::empty(m);
        for x in 0..m {
            for y in 0..m {
                if s.s.lit_true(lits[x * m + y]) {
                    r.insert(x, y);
                }
            }
        }
        frame.set_relation(b.clone(), r);
    }
    let mut model = Model::new(frame);
    for (v, lits) in &s.vars {
        let mut t = WorldSet::empty(m);
        (0..m).filter(|&x| s.s.lit_true(lits[x])).for_each(|x| t.insert(x));
        model.set_valuation(v.clone(), t);
    }
    let ok = verify_countermodel(l, &model, 0, a).unwrap_or(false);
    debug_assert!(ok, "model search produced an invalid countermodel for {a} in {l}");
    ok.then_some((model, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn o(l: Logic, s: &str) -> OracleVerdict {
        saturation_oracle(l, &parse(s), OracleConfig::default())
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(o(Logic::ND, "~([]p & []~p)"), OracleVerdict::Provable);
        assert_eq!(o(Logic::N4, "[]p -> [][]p"), OracleVerdict::Provable);
        assert_eq!(o(Logic::N, "[]p -> [][]p"), OracleVerdict::Unprovable);
        assert_eq!(o(Logic::N, "~[]false"), OracleVerdict::Unprovable);
        assert_eq!(o(Logic::NP, "~[]false"), OracleVerdict::Provable);
        assert_eq!(o(Logic::ND, "~[]false"), OracleVerdict::Provable);
        assert_eq!(o(Logic::ND, "~[](p & ~p)"), OracleVerdict::Provable);
        assert_eq!(o(Logic::NP, "~([]p & []~p)"), OracleVerdict::Unprovable);
        assert_eq!(o(Logic::ND4, "([]~~p -> []p) & ([]p -> []~~p)"), OracleVerdict::Unprovable);
    }

    #[test]
    fn two_worlds_refute_four_in_n() {
        let a = parse("[]p -> [][]p");
        assert!(find_countermodel(Logic::N, &a, 1).is_none());
        let (m, w) = find_countermodel(Logic::N, &a, 2).unwrap();
        assert!(!m.forces(w, &a).unwrap());
        assert!(find_countermodel(Logic::N4, &a, 3).is_none());
    }
}
