//! JSON and DOT forms of frames and models.
//!
//! ```json
//! {"worlds": [0, 1], "default": "identity",
//!  "relations": {"p": [[0, 1]]}, "valuation": {"1": ["p"]}}
//! ```
//!
//! `negationDefaults` (optional) maps a formula C to the policy of the indices
//! ¬ᵏC, k ≥ 1, that have no explicit relation.

use super::{DefaultPolicy, FrameSpec, Model, Relation, SemanticsError, WorldId};
use crate::formula::Formula;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub worlds: Vec<WorldId>,
    pub default: DefaultPolicy,
    #[serde(default, rename = "negationDefaults", skip_serializing_if = "BTreeMap::is_empty")]
    pub negation_defaults: BTreeMap<String, DefaultPolicy>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<(WorldId, WorldId)>>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

fn parse_formula(s: &str) -> Result<Formula, SemanticsError> {
    s.parse().map_err(|e| SemanticsError::Malformed(format!("{s:?}: {e}")))
}

impl ModelJson {
    pub fn from_frame(frame: &FrameSpec) -> ModelJson {
        let relations = frame
            .explicit()
            .iter()
            .map(|(idx, rel)| {
                let pairs = rel.pairs().map(|(x, y)| (frame.world(x), frame.world(y))).collect();
                (idx.to_string(), pairs)
            })
            .collect();
        ModelJson {
            worlds: frame.worlds().to_vec(),
            default: frame.default_policy(),
            negation_defaults: frame.negation_defaults().iter().map(|(c, p)| (c.to_string(), *p)).collect(),
            relations,
            valuation: BTreeMap::new(),
        }
    }

    pub fn from_model(m: &Model) -> ModelJson {
        let mut out = ModelJson::from_frame(&m.frame);
        for (pos, &w) in m.frame.worlds().iter().enumerate() {
            let vars: Vec<String> =
                m.valuation().iter().filter(|(_, s)| s.contains(pos)).map(|(v, _)| v.to_string()).collect();
            if !vars.is_empty() {
                out.valuation.insert(w.to_string(), vars);
            }
        }
        out
    }

    pub fn to_frame(&self) -> Result<FrameSpec, SemanticsError> {
        let mut f = FrameSpec::new(self.worlds.clone(), self.default)?;
        for (c, p) in &self.negation_defaults {
            f.set_negation_default(parse_formula(c)?, *p);
        }
        for (idx, pairs) in &self.relations {
            let idx = parse_formula(idx)?;
            f.set_relation(idx.clone(), Relation::empty(f.len()));
            for &(x, y) in pairs {
                f.add_edge(&idx, x, y)?;
            }
        }
        Ok(f)
    }

    pub fn to_model(&self) -> Result<Model, SemanticsError> {
        let mut m = Model::new(self.to_frame()?);
        for (w, vars) in &self.valuation {
            let w: WorldId = w.parse().map_err(|_| SemanticsError::Malformed(format!("world id {w:?}")))?;
            for v in vars {
                let var = parse_formula(v)?;
                if !matches!(var.kind(), crate::formula::Kind::Var(_)) {
                    return Err(SemanticsError::Malformed(format!("{v:?} is not a variable")));
                }
                m.set_true(&var, w)?;
            }
        }
        Ok(m)
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One digraph per explicit index; edges are labelled with the index.
pub fn to_dot(frame: &FrameSpec) -> String {
    let mut out = String::new();
    for (idx, rel) in frame.explicit() {
        let label = quote(&idx.to_string());
        writeln!(out, "digraph {label} {{").unwrap();
        for &w in frame.worlds() {
            writeln!(out, "  {};", quote(&w.to_string())).unwrap();
        }
        for (x, y) in rel.pairs() {
            writeln!(
                out,
                "  {} -> {} [label={label}];",
                quote(&frame.world(x).to_string()),
                quote(&frame.world(y).to_string())
            )
            .unwrap();
        }
        out.push_str("}\n");
    }
    out
}
