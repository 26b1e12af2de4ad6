//! A finite, symbolic executor for the staged constructions of an output
//! function g (what a provability predicate counts as proved) and a switch
//! function h, for ND/ND4 (with the Φ condition, Case A and the X-set) and
//! NP/NP4 (J-triggered only).
//!
//! Sandbox formulas ([`SFormula`]) stand for sentences of arithmetic:
//! provability literals, marker atoms for λ(j̄), ∀xα_B(x), α_B(j̄), ∀xβ_B(x),
//! β_B(j̄), and images of modal formulas under [`image`]. Tautological
//! consequence treats all of them as atoms.

mod claims;
mod eval;
mod interp;
mod library;
mod run;
mod sformula;
mod stream;

pub use claims::{assert_trace_claims, run_predicate, Assertion, ClaimReport, Status};
pub use eval::{eval_pr, PrValue, PredicateKind, TraceIndex};
pub use interp::{image, is_image, preimage};
pub use library::{Library, LibraryEntry};
pub use run::{
    check_phi, compute_j, run_staged, run_staged_simple, simulate, unwind, x_set, PhiWitness, StagedTrace, TailInfo,
    Trigger,
};
pub use sformula::{is_atom_name, sparse, Marker, PrKind, SFormula, SGrammar, SKind, SParseError};
pub use stream::{Scenario, StreamDefault, TheoryStream};

use crate::coding::GNumber;
use crate::logic::Logic;
use crate::prover::ProverError;
use crate::semantics::{SemanticsError, WorldId};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SandboxError {
    #[error("world {world} lies beyond the {blocks} library blocks")]
    LibraryExhausted { world: WorldId, blocks: usize },
    #[error("the sandbox runs ND, ND4, NP and NP4, not {0}")]
    UnsupportedLogic(Logic),
    #[error(transparent)]
    Prover(#[from] ProverError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// The machine-readable form of a run. `g` holds Gödel numbers as decimal
/// strings, `"0"` for stages without output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceJson {
    pub logic: Logic,
    pub horizon: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub switch_stage: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trigger: Option<Trigger>,
    pub h: Vec<u64>,
    pub g: Vec<GNumber>,
    pub assertions: Vec<Assertion>,
}

impl TraceJson {
    pub fn new(trace: &StagedTrace, report: &ClaimReport) -> TraceJson {
        TraceJson {
            logic: trace.logic,
            horizon: trace.horizon,
            switch_stage: trace.switch_stage,
            trigger: trace.trigger.clone(),
            h: trace.h.clone(),
            g: trace.g.iter().map(|o| o.as_ref().map_or_else(GNumber::zero, SFormula::gn)).collect(),
            assertions: report.assertions.clone(),
        }
    }
}

/// Runs a scenario with a freshly generated library and checks its claims.
pub fn run_scenario(sc: &Scenario) -> Result<(StagedTrace, ClaimReport), SandboxError> {
    let lib = Library::generate(sc.logic, sc.library_size)?;
    let trace = simulate(sc.logic, &sc.stream, &lib, sc.horizon)?;
    let report = assert_trace_claims(&trace, &sc.stream, &lib)?;
    Ok((trace, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_json_shape() {
        let sc: Scenario = serde_json::from_str(
            r#"{"logic":"NP4","horizon":6,"stream":{"outputs":{"1":"~lambda(2)"},"default":"skip"}}"#,
        )
        .unwrap();
        let (t, rep) = run_scenario(&sc).unwrap();
        let j = serde_json::to_value(TraceJson::new(&t, &rep)).unwrap();
        assert_eq!(j["switchStage"], 1);
        assert_eq!(j["trigger"], serde_json::json!({"kind": "j", "world": 2, "model": 1}));
        assert_eq!(j["h"], serde_json::json!([0, 0, 2, 2, 2, 2, 2]));
        // Stage 0 skipped; the tail starts at stage 1 with ξ₀ = false, dropped
        // since no NP-world forces □⊥, then ξ₁ = true.
        assert_eq!(j["g"][0], "0");
        assert_eq!(j["g"][1], "0");
        assert_eq!(j["g"][2], "2");
        assert!(rep.all_pass());
    }
}
