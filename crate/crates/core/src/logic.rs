//! The six logics, their axiom schemas and frame classes.

use crate::formula::{Formula, Kind};
use crate::semantics::FrameClass;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Logic {
    N,
    NP,
    ND,
    N4,
    NP4,
    ND4,
}

/// Axiom schemas beyond N's empty set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Schema {
    /// ¬□⊥
    P,
    /// ¬(□C ∧ □¬C)
    D,
    /// □C → □□C
    Four,
}

impl Logic {
    pub const ALL: [Logic; 6] = [Logic::N, Logic::NP, Logic::ND, Logic::N4, Logic::NP4, Logic::ND4];

    pub fn has_p(self) -> bool {
        matches!(self, Logic::NP | Logic::NP4)
    }

    pub fn has_d(self) -> bool {
        matches!(self, Logic::ND | Logic::ND4)
    }

    pub fn has_four(self) -> bool {
        matches!(self, Logic::N4 | Logic::NP4 | Logic::ND4)
    }

    pub fn schemas(self) -> Vec<Schema> {
        let mut out = Vec::new();
        if self.has_p() {
            out.push(Schema::P);
        }
        if self.has_d() {
            out.push(Schema::D);
        }
        if self.has_four() {
            out.push(Schema::Four);
        }
        out
    }

    /// The classes whose intersection is this logic's frame class.
    pub fn frame_classes(self) -> Vec<FrameClass> {
        let mut out = Vec::new();
        if self.has_p() {
            out.push(FrameClass::NP);
        }
        if self.has_d() {
            out.push(FrameClass::ND);
        }
        if self.has_four() {
            out.push(FrameClass::Transitive);
        }
        if out.is_empty() {
            out.push(FrameClass::N);
        }
        out
    }

    /// Whether `self` proves every theorem of `other`.
    pub fn extends(self, other: Logic) -> bool {
        let p = |l: Logic| l.has_p() || l.has_d();
        (!other.has_four() || self.has_four()) && (!other.has_d() || self.has_d()) && (!p(other) || p(self))
    }

    /// Whether `f` is an instance of one of this logic's schemas.
    pub fn is_axiom(self, f: &Formula) -> bool {
        self.schemas().into_iter().any(|s| s.matches(f))
    }
}

impl Schema {
    pub fn matches(self, f: &Formula) -> bool {
        match self {
            Schema::P => *f == Formula::not(Formula::boxed(Formula::bot())),
            Schema::D => {
                let Some(conj) = f.not_arg() else { return false };
                let Kind::And(l, r) = conj.kind() else { return false };
                match (l.box_arg(), r.box_arg()) {
                    (Some(c), Some(nc)) => nc.not_arg() == Some(c),
                    _ => false,
                }
            }
            Schema::Four => {
                let Kind::Imp(l, r) = f.kind() else { return false };
                l.is_box() && r.box_arg() == Some(l)
            }
        }
    }

    pub fn instance(self, c: &Formula) -> Formula {
        match self {
            Schema::P => Formula::not(Formula::boxed(Formula::bot())),
            Schema::D => Formula::not(Formula::and(Formula::boxed(c.clone()), Formula::boxed(Formula::not(c.clone())))),
            Schema::Four => {
                let bc = Formula::boxed(c.clone());
                Formula::imp(bc.clone(), Formula::boxed(bc))
            }
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LogicParseError {
    #[error("{0} is recognised but not decided (only its frame class can be checked)")]
    NotDecided(String),
    #[error("unknown logic {0:?}; expected one of N, NP, ND, N4, NP4, ND4")]
    Unknown(String),
}

impl FromStr for Logic {
    type Err = LogicParseError;

    fn from_str(s: &str) -> Result<Logic, LogicParseError> {
        match s.to_ascii_uppercase().as_str() {
            "N" => Ok(Logic::N),
            "NP" => Ok(Logic::NP),
            "ND" => Ok(Logic::ND),
            "N4" => Ok(Logic::N4),
            "NP4" => Ok(Logic::NP4),
            "ND4" => Ok(Logic::ND4),
            "NR" | "NR4" => Err(LogicParseError::NotDecided(s.to_string())),
            _ => Err(LogicParseError::Unknown(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn schema_matching() {
        assert!(Logic::NP.is_axiom(&parse("~[]false")));
        assert!(!Logic::N.is_axiom(&parse("~[]false")));
        assert!(!Logic::ND.is_axiom(&parse("~[]false")));
        assert!(Logic::ND.is_axiom(&parse("~([](p & q) & []~(p & q))")));
        assert!(!Logic::ND.is_axiom(&parse("~([]~p & []p)")));
        assert!(Logic::N4.is_axiom(&parse("[]~p -> [][]~p")));
        assert!(!Logic::N4.is_axiom(&parse("[]p -> [][]q")));
        for s in [Schema::P, Schema::D, Schema::Four] {
            assert!(s.matches(&s.instance(&parse("[]p | q"))));
        }
    }

    #[test]
    fn hierarchy_and_names() {
        assert!(Logic::ND.extends(Logic::NP));
        assert!(!Logic::NP.extends(Logic::ND));
        assert!(Logic::ND4.extends(Logic::N4) && Logic::ND4.extends(Logic::NP));
        assert!(!Logic::NP4.extends(Logic::ND));
        assert_eq!("nd4".parse::<Logic>(), Ok(Logic::ND4));
        assert!(matches!("NR".parse::<Logic>(), Err(LogicParseError::NotDecided(_))));
        assert!(matches!("K".parse::<Logic>(), Err(LogicParseError::Unknown(_))));
    }
}
