//! Witness-comparison provability predicates evaluated on a finite prefix of
//! the output sequence g.

use super::interp::is_image;
use super::run::StagedTrace;
use super::sformula::SFormula;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PredicateKind {
    /// Plain: φ has been output.
    Prf,
    /// φ output before ¬φ.
    R,
    /// φ★ output before (¬φ)★.
    A,
    /// R on the image of f, A elsewhere.
    Dagger,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "value", rename_all = "camelCase")]
pub enum PrValue {
    /// True, with the least witness stage.
    True { witness: u64 },
    /// Not yet true; a later output could still make it true.
    FalseAtHorizon,
    /// A blocking output came first; false at every horizon.
    SettledFalse,
}

impl PrValue {
    pub fn is_true(self) -> bool {
        matches!(self, PrValue::True { .. })
    }
}

/// First-output stages of the outputs g(0), …, g(horizon − 1).
pub struct TraceIndex {
    first: HashMap<SFormula, u64>,
}

impl TraceIndex {
    pub fn new(trace: &StagedTrace, horizon: u64) -> TraceIndex {
        let mut first = HashMap::new();
        for (s, o) in trace.g.iter().enumerate().take(horizon as usize) {
            if let Some(o) = o {
                first.entry(o.clone()).or_insert(s as u64);
            }
        }
        TraceIndex { first }
    }

    pub fn first(&self, f: &SFormula) -> Option<u64> {
        self.first.get(f).copied()
    }

    /// `x` output, and no earlier output of `blocker`.
    fn compare(&self, x: &SFormula, blocker: &SFormula) -> PrValue {
        match (self.first(x), self.first(blocker)) {
            (Some(y), Some(z)) if z < y => PrValue::SettledFalse,
            (Some(y), _) => PrValue::True { witness: y },
            (None, Some(_)) => PrValue::SettledFalse,
            (None, None) => PrValue::FalseAtHorizon,
        }
    }

    pub fn eval(&self, kind: PredicateKind, target: &SFormula) -> PrValue {
        match kind {
            PredicateKind::Prf => match self.first(target) {
                Some(y) => PrValue::True { witness: y },
                None => PrValue::FalseAtHorizon,
            },
            PredicateKind::R => self.compare(target, &SFormula::neg(target.clone())),
            PredicateKind::A => self.compare(&target.star(), &SFormula::neg(target.clone()).star()),
            PredicateKind::Dagger if is_image(target) => self.eval(PredicateKind::R, target),
            PredicateKind::Dagger => self.eval(PredicateKind::A, target),
        }
    }
}

pub fn eval_pr(kind: PredicateKind, target: &SFormula, trace: &StagedTrace, horizon: u64) -> PrValue {
    TraceIndex::new(trace, horizon).eval(kind, target)
}
