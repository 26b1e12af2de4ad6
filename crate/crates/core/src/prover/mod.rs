//! Decision procedures for N, NP, ND, N4, NP4, ND4.
//!
//! Provability is reduced to tautological consequence: a formula is a theorem
//! iff it follows truth-functionally from axiom instances and necessitations
//! □B of theorems B. The premises are drawn from a bounded universe around
//! the closure of the query; every verdict is checked before it is returned,
//! so an insufficient bound shows up as an error, never as a wrong answer.

mod canonical;
mod certificate;
mod saturation;
mod verdict;

pub use canonical::{build_canonical_model, decide, max_cons_sets, verify_countermodel, CanonicalModel};
pub use certificate::{verify_certificate, Certificate, Premise};
pub use saturation::{saturation_oracle, OracleConfig, OracleVerdict};
pub use verdict::{Stats, Verdict, VerdictKind};

use crate::closure::{overline_closure, premise_universe, FormulaSet};
use crate::formula::Formula;
use crate::logic::{Logic, Schema};
use crate::prop::{is_tautology, Encoder};
use crate::semantics::SemanticsError;
use std::collections::HashMap;
use std::sync::RwLock;

pub const DEFAULT_DEPTH: usize = 2;

#[derive(Debug, thiserror::Error)]
pub enum ProverError {
    /// A verdict failed its own check: the premise bound was too small.
    #[error("internal completeness error: {0}")]
    InternalCompleteness(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// A premise of a provability query, before certification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PremiseSource {
    Axiom(Schema),
    /// □B with B a theorem.
    Necessitation,
}

/// Bounded-premise provability for one logic, memoised and thread-safe.
pub struct Prover {
    logic: Logic,
    depth: usize,
    memo: RwLock<HashMap<Formula, bool>>,
}

impl Prover {
    pub fn new(logic: Logic) -> Prover {
        Prover::with_depth(logic, DEFAULT_DEPTH)
    }

    pub fn with_depth(logic: Logic, depth: usize) -> Prover {
        assert!(depth >= 1, "premise universe depth must be positive");
        Prover { logic, depth, memo: RwLock::new(HashMap::new()) }
    }

    pub fn logic(&self) -> Logic {
        self.logic
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn universe(&self, a: &Formula) -> FormulaSet {
        premise_universe(self.logic, &overline_closure(a), self.depth)
    }

    /// Whether □C may be used as a necessitation premise for `a`. The modal
    /// depth of C must drop below that of `a` (constants excepted), which
    /// makes the recursion well-founded.
    fn nec_eligible(a: &Formula, c: &Formula) -> bool {
        c != a && (c.modal_depth() < a.modal_depth() || c.modal_depth() == 0)
    }

    /// The premises available to `a`: axiom instances over the universe and
    /// □C for the eligible theorems C, in Gödel-number order.
    pub fn premises(&self, a: &Formula) -> Vec<(Formula, PremiseSource)> {
        let v = self.universe(a);
        let mut out = Vec::new();
        for bx in v.iter().filter(|f| f.is_box()) {
            let c = bx.box_arg().expect("box");
            if self.logic.has_p() && c == &Formula::bot() {
                out.push((Schema::P.instance(c), PremiseSource::Axiom(Schema::P)));
            }
            if self.logic.has_d() && v.contains(&Formula::boxed(Formula::not(c.clone()))) {
                out.push((Schema::D.instance(c), PremiseSource::Axiom(Schema::D)));
            }
            if self.logic.has_four() && v.contains(&Formula::boxed(bx.clone())) {
                out.push((Schema::Four.instance(c), PremiseSource::Axiom(Schema::Four)));
            }
            if Self::nec_eligible(a, c) && self.lprovable(c) {
                out.push((bx.clone(), PremiseSource::Necessitation));
            }
        }
        out
    }

    /// Whether `a` is a theorem, as far as the bounded premises can show.
    pub fn lprovable(&self, a: &Formula) -> bool {
        if a.modal_depth() == 0 {
            return is_tautology(a);
        }
        if let Some(&b) = self.memo.read().expect("memo").get(a) {
            return b;
        }
        let prem = self.premises(a);
        let mut enc = Encoder::new();
        for (p, _) in &prem {
            enc.assert(p);
        }
        let b = enc.entails(a);
        self.memo.write().expect("memo").insert(a.clone(), b);
        b
    }

    /// A proof certificate for `a`, or `None` if `a` is not provable.
    pub fn certificate(&self, a: &Formula) -> Option<Certificate> {
        if !self.lprovable(a) {
            return None;
        }
        let prem = if a.modal_depth() == 0 { Vec::new() } else { self.premises(a) };
        let used = certificate::minimize(&prem, a);
        let mut premises = Vec::with_capacity(used.len());
        for (f, src) in used {
            premises.push(match src {
                PremiseSource::Axiom(_) => Premise::Axiom { logic: self.logic, formula: f },
                PremiseSource::Necessitation => {
                    let b = f.box_arg().expect("box").clone();
                    let sub = self.certificate(&b).expect("necessitated premise is provable");
                    Premise::Necessitation { formula: f, certificate: Box::new(sub) }
                }
            });
        }
        Some(Certificate { goal: a.clone(), premises })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn small_provability_facts() {
        let t = |l: Logic, s: &str| Prover::new(l).lprovable(&parse(s));
        assert!(t(Logic::N, "true"));
        assert!(t(Logic::N, "[]true"));
        assert!(t(Logic::N, "[][](p -> p)"));
        assert!(!t(Logic::N, "~[]false"));
        assert!(t(Logic::NP, "~[]false"));
        assert!(t(Logic::ND, "~[]false"));
        assert!(t(Logic::ND, "~[](p & ~p)"));
        assert!(!t(Logic::NP, "~([]p & []~p)"));
        assert!(t(Logic::N4, "[]p -> [][]p"));
        assert!(!t(Logic::N, "[]p -> [][]p"));
        assert!(!t(Logic::ND4, "([]~~p -> []p) & ([]p -> []~~p)"));
        // No K axiom: boxes do not distribute.
        assert!(!t(Logic::ND4, "[](p -> q) -> ([]p -> []q)"));
        assert!(!t(Logic::ND4, "[](p & q) -> []p"));
    }

    #[test]
    fn nd_certificate_uses_the_companion_box() {
        let p = Prover::new(Logic::ND);
        let c = p.certificate(&parse("~[](p & ~p)")).unwrap();
        let fs: Vec<String> = c.premises.iter().map(|x| x.formula().to_string()).collect();
        assert_eq!(fs.len(), 2, "{fs:?}");
        assert!(fs.contains(&"[]~(p & ~p)".to_string()), "{fs:?}");
        assert!(fs.contains(&"~([](p & ~p) & []~(p & ~p))".to_string()), "{fs:?}");
        assert!(verify_certificate(Logic::ND, &c));
    }
}
