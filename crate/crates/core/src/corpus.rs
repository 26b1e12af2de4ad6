//! Exhaustive formula corpora and the decide-versus-oracle agreement run.

use crate::formula::Formula;
use crate::logic::Logic;
use crate::par::Execution;
use crate::prover::{decide, saturation_oracle, OracleConfig, OracleVerdict, Prover, ProverError, VerdictKind};

/// Every formula with at most `max_size` nodes built from `leaves` with all
/// connectives, in Gödel-number order.
pub fn formulas_up_to(max_size: usize, leaves: &[Formula]) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(), leaves.to_vec()];
    for n in 2..=max_size {
        let mut cur = Vec::new();
        for f in &by_size[n - 1] {
            cur.push(Formula::not(f.clone()));
            cur.push(Formula::boxed(f.clone()));
        }
        for i in 1..n - 1 {
            for l in &by_size[i] {
                for r in &by_size[n - 1 - i] {
                    cur.push(Formula::and(l.clone(), r.clone()));
                    cur.push(Formula::or(l.clone(), r.clone()));
                    cur.push(Formula::imp(l.clone(), r.clone()));
                }
            }
        }
        by_size.push(cur);
    }
    let mut out: Vec<Formula> = by_size.into_iter().take(max_size + 1).flatten().collect();
    out.sort();
    out
}

/// The one-variable corpus: leaves p, ⊥ and ⊤.
pub fn one_variable(max_size: usize) -> Vec<Formula> {
    formulas_up_to(max_size, &[Formula::var("p"), Formula::bot(), Formula::top()])
}

/// One formula on which `decide` and the oracle were compared.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub formula: Formula,
    pub decided: Result<VerdictKind, String>,
    pub oracle: OracleVerdict,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        matches!(
            (&self.decided, self.oracle),
            (Ok(VerdictKind::Provable), OracleVerdict::Provable)
                | (Ok(VerdictKind::Unprovable), OracleVerdict::Unprovable)
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct AgreementReport {
    pub logic: Option<Logic>,
    pub total: usize,
    pub provable: usize,
    pub unknown: usize,
    pub errors: usize,
    pub disagreements: Vec<Comparison>,
}

/// Decides every formula (verdicts are self-checking) and compares each with
/// the oracle.
pub fn agreement(l: Logic, corpus: &[Formula], depth: usize, cfg: OracleConfig, exec: Execution) -> AgreementReport {
    let prover = Prover::with_depth(l, depth);
    let results = exec.map(corpus, |a| Comparison {
        formula: a.clone(),
        decided: decide(&prover, a).map(|v| v.verdict).map_err(|e: ProverError| e.to_string()),
        oracle: saturation_oracle(l, a, cfg),
    });
    let mut rep = AgreementReport { logic: Some(l), total: results.len(), ..Default::default() };
    for c in results {
        rep.provable += usize::from(c.decided == Ok(VerdictKind::Provable));
        rep.unknown += usize::from(c.oracle == OracleVerdict::Unknown);
        rep.errors += usize::from(c.decided.is_err());
        if !c.agrees() {
            rep.disagreements.push(c);
        }
    }
    rep
}
