//! Trace-level checks of the properties the constructions are built to have.

use super::eval::{PredicateKind, TraceIndex};
use super::interp::{is_image, preimage};
use super::library::Library;
use super::run::{unwind, StagedTrace, Trigger};
use super::sformula::{SFormula, SGrammar};
use super::stream::TheoryStream;
use super::SandboxError;
use crate::logic::Logic;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub claim: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub assertions: Vec<Assertion>,
}

impl ClaimReport {
    fn push(&mut self, claim: &str, failure: Option<String>) {
        self.assertions.push(Assertion {
            claim: claim.to_string(),
            status: if failure.is_some() { Status::Fail } else { Status::Pass },
            witness: failure,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.assertions.iter().all(|a| a.status == Status::Pass)
    }

    pub fn get(&self, claim: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.claim == claim)
    }

    pub fn passed(&self, claim: &str) -> bool {
        self.get(claim).is_some_and(|a| a.status == Status::Pass)
    }
}

/// The provability predicate a run is built for: Pr^† for ND/ND4, the plain
/// output predicate for NP/NP4.
pub fn run_predicate(l: Logic) -> PredicateKind {
    if l.has_d() {
        PredicateKind::Dagger
    } else {
        PredicateKind::Prf
    }
}

/// Checks, in order:
/// - `switch`: h is 0 up to one switch and constant afterwards;
/// - `fidelity`: before the switch g copies the stream;
/// - `d`: no φ with Pr^†(φ) and Pr^†(¬φ) both true;
/// - `four` (ND4, NP4): Pr(φ) true and the literal Pr[φ] inside the emitted
///   tail window imply Pr(Pr[φ]) true;
/// - `case-a`: the scheduled outputs after a Φ-switch;
/// - `tail-filter`: each tail stage holds ξ_t, or 0 exactly for the images
///   f(B) with i ⊮ □B;
/// - `no-bot` (NP, NP4): ⊥ is never output from the switch on;
/// - `bookkeeping-i` … `bookkeeping-iv` (ND, ND4): facts about the prefix
///   before the switch stage.
pub fn assert_trace_claims(
    trace: &StagedTrace,
    stream: &TheoryStream,
    lib: &Library,
) -> Result<ClaimReport, SandboxError> {
    let mut rep = ClaimReport::default();
    let l = trace.logic;
    let idx = TraceIndex::new(trace, trace.horizon);
    let sw = trace.switch_stage.unwrap_or(trace.horizon);

    let changes: Vec<usize> = (1..trace.h.len()).filter(|&s| trace.h[s] != trace.h[s - 1]).collect();
    let bad = if changes.len() > 1 {
        Some(format!("h changes at stages {changes:?}"))
    } else if trace.h.first().is_some_and(|&x| x != 0) {
        Some("h(0) ≠ 0".into())
    } else {
        None
    };
    rep.push("switch", bad);

    let bad = (0..sw).find(|&s| trace.g[s as usize] != stream.output(s)).map(|s| format!("stage {s}"));
    rep.push("fidelity", bad);

    let mut candidates = BTreeSet::new();
    for o in trace.g.iter().flatten() {
        let n = SFormula::neg(o.clone());
        candidates.insert(o.star());
        candidates.insert(n.star());
        if let Some(a) = o.neg_arg() {
            candidates.insert(a.clone());
        }
        candidates.insert(n);
        candidates.insert(o.clone());
    }
    let bad = candidates.iter().find_map(|phi| {
        let (a, b) =
            (idx.eval(PredicateKind::Dagger, phi), idx.eval(PredicateKind::Dagger, &SFormula::neg(phi.clone())));
        (a.is_true() && b.is_true()).then(|| format!("{phi}: {a:?} and {b:?}"))
    });
    rep.push("d", bad);

    if l.has_four() {
        let pk = run_predicate(l);
        let window = trace.tail.as_ref().and_then(|t| t.last.clone());
        let outputs: BTreeSet<&SFormula> = trace.g.iter().flatten().collect();
        let bad = window.and_then(|last| {
            outputs.iter().find_map(|&phi| {
                let lit = SFormula::dagger(phi.clone());
                if lit > last || !idx.eval(pk, phi).is_true() {
                    return None;
                }
                let v = idx.eval(pk, &lit);
                (!v.is_true()).then(|| format!("{phi} holds but {lit} is {v:?}"))
            })
        });
        rep.push("four", bad);
    }

    if let (Some(s), Some(trig), Some(tail)) = (trace.switch_stage, &trace.trigger, &trace.tail) {
        if let Trigger::Phi { iteration, .. } = trig {
            let r = iteration.len();
            let bad = (0..r).find_map(|j| {
                let want = SFormula::neg(iteration[r - 1 - j].clone()).star();
                let st = s as usize + j;
                (st < trace.g.len() && trace.g[st].as_ref() != Some(&want))
                    .then(|| format!("stage {st}: expected {want}"))
            });
            rep.push("case-a", bad);
        }

        let i = trig.world();
        let mut bad = None;
        let grammar = SGrammar::new();
        for (t, xi) in grammar.enumerate().enumerate() {
            let st = tail.start as usize + t;
            if st >= trace.g.len() {
                break;
            }
            let dropped = match preimage(&xi) {
                Some(b) => !lib.forces_box(i, &b)?,
                None => false,
            };
            let want = if dropped { None } else { Some(xi.clone()) };
            if trace.g[st] != want {
                bad = Some(format!("stage {st}: ξ_{t} = {xi}"));
                break;
            }
        }
        rep.push("tail-filter", bad);

        if !l.has_d() {
            let bot = SFormula::bot();
            let bad = (s as usize..trace.g.len()).find(|&st| trace.g[st].as_ref() == Some(&bot));
            rep.push("no-bot", bad.map(|st| format!("stage {st}")));
        } else {
            bookkeeping(trace, s, trig, &mut rep);
        }
    }
    Ok(rep)
}

fn bookkeeping(trace: &StagedTrace, s: u64, trig: &Trigger, rep: &mut ClaimReport) {
    let prefix: HashSet<&SFormula> = trace.g[..s as usize].iter().flatten().collect();
    let has = |f: &SFormula| prefix.contains(f);
    let phis: BTreeSet<SFormula> =
        prefix.iter().filter_map(|o| o.neg_dagger_arg()).filter(|phi| !is_image(phi)).cloned().collect();
    let (mut b1, mut b2, mut b3, mut b4) = (None, None, None, None);
    for phi in &phis {
        let star = phi.star();
        let neg_star = SFormula::neg(phi.clone()).star();
        if b1.is_none() && star.neg_dagger_arg().is_none() && !has(&neg_star) {
            b1 = Some(format!("{phi}: {neg_star} missing"));
        }
        let chain = unwind(phi);
        if b2.is_none() && chain.len() > 1 {
            if let Some(sig) = chain[1..].iter().find(|sig| !has(&SFormula::neg((*sig).clone()).star())) {
                b2 = Some(format!("{phi}: (~{sig})★ missing"));
            }
        }
        if let Trigger::Phi { iteration, .. } = trig {
            if b3.is_none() && iteration.iter().any(|sig| SFormula::neg(sig.clone()).star() == star) {
                b3 = Some(format!("{phi}"));
            }
        }
        if b4.is_none() && has(&star) {
            b4 = Some(format!("{phi}: {star} present"));
        }
    }
    rep.push("bookkeeping-i", b1);
    rep.push("bookkeeping-ii", b2);
    rep.push("bookkeeping-iii", b3);
    rep.push("bookkeeping-iv", b4);
}
