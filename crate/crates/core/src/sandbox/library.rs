//! The countermodel library ⟨A_k, W_k⟩: the first unprovable formulas of a
//! logic in code order, each with a verified countermodel whose worlds are
//! renamed into a private block of positive integers.

use super::SandboxError;
use crate::closure::sub;
use crate::formula::{Formula, ModalGrammar};
use crate::logic::Logic;
use crate::prover::{decide, Prover};
use crate::semantics::{Model, WorldId};

#[derive(Clone, Debug)]
pub struct LibraryEntry {
    /// A_k.
    pub formula: Formula,
    /// A countermodel to A_k with worlds `start..start + len`.
    pub model: Model,
    /// A world refuting A_k.
    pub world: WorldId,
    pub start: WorldId,
}

impl LibraryEntry {
    pub fn contains(&self, w: WorldId) -> bool {
        w >= self.start && w < self.start + self.model.frame.len() as WorldId
    }
}

#[derive(Clone, Debug)]
pub struct Library {
    pub logic: Logic,
    pub entries: Vec<LibraryEntry>,
}

impl Library {
    /// The first `size` formulas unprovable in `l`, with the countermodels
    /// returned by `decide`. Block k starts at 1 + Σ_{j<k} |W_j|.
    pub fn generate(l: Logic, size: usize) -> Result<Library, SandboxError> {
        let prover = Prover::new(l);
        let mut found = Vec::new();
        for a in ModalGrammar::new().enumerate() {
            if found.len() == size {
                break;
            }
            let v = decide(&prover, &a)?;
            if let Some(cm) = v.countermodel() {
                let (m, w) = cm?;
                found.push((a, m, w));
            }
        }
        Library::from_models(l, found)
    }

    /// Lays out the given countermodels (with any world names) in consecutive
    /// blocks starting at world 1.
    pub fn from_models(l: Logic, models: Vec<(Formula, Model, WorldId)>) -> Result<Library, SandboxError> {
        let mut entries = Vec::with_capacity(models.len());
        let mut start: WorldId = 1;
        for (formula, m, w) in models {
            let n = m.frame.len() as WorldId;
            let pos = m.frame.position(w)? as WorldId;
            let ids: Vec<WorldId> = (start..start + n).collect();
            let mut model = Model::new(m.frame.renumbered(&ids)?);
            for (v, set) in m.valuation() {
                model.set_valuation(v.clone(), set.clone());
            }
            entries.push(LibraryEntry { formula, model, world: start + pos, start });
            start += n;
        }
        Ok(Library { logic: l, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The block holding world `w`.
    pub fn locate(&self, w: WorldId) -> Option<(usize, &LibraryEntry)> {
        self.entries.iter().enumerate().find(|(_, e)| e.contains(w))
    }

    /// Whether `w ∈ W_k` for some k with `b ∈ Sub(A_k)`.
    pub fn sub_of_block(&self, w: WorldId, b: &Formula) -> bool {
        self.locate(w).is_some_and(|(_, e)| sub(&e.formula).contains(b))
    }

    /// w ⊩_k □B in the block of w.
    pub fn forces_box(&self, w: WorldId, b: &Formula) -> Result<bool, SandboxError> {
        let (_, e) = self.locate(w).ok_or(SandboxError::LibraryExhausted { world: w, blocks: self.len() })?;
        Ok(e.model.forces(w, &Formula::boxed(b.clone()))?)
    }
}
