//! Theory streams (what the theory proves at each stage) and scenario files.

use super::sformula::SFormula;
use crate::logic::Logic;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Output of stages that are not scripted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StreamDefault {
    /// The skip code 0.
    #[default]
    Skip,
    /// Stage s proves `t<s> -> t<s>`.
    Tautologies,
}

/// A total map from stages to outputs; `None` is the skip code 0.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TheoryStream {
    #[serde(default)]
    pub outputs: BTreeMap<u64, SFormula>,
    #[serde(default)]
    pub default: StreamDefault,
}

impl TheoryStream {
    pub fn scripted(outputs: impl IntoIterator<Item = (u64, SFormula)>, default: StreamDefault) -> Self {
        TheoryStream { outputs: outputs.into_iter().collect(), default }
    }

    pub fn tautologies() -> Self {
        TheoryStream { outputs: BTreeMap::new(), default: StreamDefault::Tautologies }
    }

    pub fn output(&self, s: u64) -> Option<SFormula> {
        if let Some(f) = self.outputs.get(&s) {
            return Some(f.clone());
        }
        match self.default {
            StreamDefault::Skip => None,
            StreamDefault::Tautologies => {
                let t = SFormula::atom(&format!("t{s}"));
                Some(SFormula::imp(t.clone(), t))
            }
        }
    }
}

fn default_library() -> usize {
    3
}

/// A `simulate` input:
///
/// ```json
/// {"logic": "ND4", "horizon": 500,
///  "stream": {"outputs": {"2": "~lambda(1)"}, "default": "tautologies"},
///  "librarySize": 3}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Scenario {
    pub logic: Logic,
    pub horizon: u64,
    #[serde(default)]
    pub stream: TheoryStream,
    #[serde(default = "default_library")]
    pub library_size: usize,
}
