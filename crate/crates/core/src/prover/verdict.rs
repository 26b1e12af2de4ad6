use super::Certificate;
use crate::formula::Formula;
use crate::logic::Logic;
use crate::semantics::{Model, ModelJson, SemanticsError, WorldId};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Provable,
    Unprovable,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Stats {
    pub closure_size: usize,
    /// Worlds of the returned countermodel; 0 for provable formulas.
    pub world_count: usize,
    pub oracle_depth: usize,
}

/// The outcome of `decide`, carrying its own evidence: a certificate for
/// provable formulas, a model and a falsifying world otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub logic: Logic,
    pub formula: Formula,
    pub verdict: VerdictKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub world: Option<WorldId>,
    pub stats: Stats,
}

impl Verdict {
    pub fn provable(logic: Logic, formula: Formula, certificate: Certificate, stats: Stats) -> Verdict {
        Verdict {
            logic,
            formula,
            verdict: VerdictKind::Provable,
            certificate: Some(certificate),
            model: None,
            world: None,
            stats,
        }
    }

    pub fn unprovable(logic: Logic, formula: Formula, model: &Model, world: WorldId, stats: Stats) -> Verdict {
        Verdict {
            logic,
            formula,
            verdict: VerdictKind::Unprovable,
            certificate: None,
            model: Some(ModelJson::from_model(model)),
            world: Some(world),
            stats,
        }
    }

    pub fn is_provable(&self) -> bool {
        self.verdict == VerdictKind::Provable
    }

    /// The countermodel of an unprovable verdict.
    pub fn countermodel(&self) -> Option<Result<(Model, WorldId), SemanticsError>> {
        let (m, w) = (self.model.as_ref()?, self.world?);
        Some(m.to_model().map(|m| (m, w)))
    }
}
