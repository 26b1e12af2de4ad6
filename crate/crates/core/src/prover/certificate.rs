//! Proof certificates: a goal together with axiom instances and necessitated
//! theorems (each with its own certificate) from which it follows
//! truth-functionally.

use super::PremiseSource;
use crate::formula::Formula;
use crate::logic::Logic;
use crate::prop::{atoms_of, tc_entails, Encoder};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub goal: Formula,
    pub premises: Vec<Premise>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Premise {
    Axiom { logic: Logic, formula: Formula },
    Necessitation { formula: Formula, certificate: Box<Certificate> },
}

impl Premise {
    pub fn formula(&self) -> &Formula {
        match self {
            Premise::Axiom { formula, .. } | Premise::Necessitation { formula, .. } => formula,
        }
    }
}

impl Certificate {
    /// Number of certificate nodes, this one included.
    pub fn size(&self) -> usize {
        1 + self
            .premises
            .iter()
            .map(|p| match p {
                Premise::Axiom { .. } => 0,
                Premise::Necessitation { certificate, .. } => certificate.size(),
            })
            .sum::<usize>()
    }
}

/// Checks every axiom against `l`'s schemas, every necessitation against its
/// sub-certificate, and the final tautological-consequence step.
pub fn verify_certificate(l: Logic, c: &Certificate) -> bool {
    for p in &c.premises {
        let ok = match p {
            Premise::Axiom { logic, formula } => *logic == l && l.is_axiom(formula),
            Premise::Necessitation { formula, certificate } => {
                formula.box_arg() == Some(&certificate.goal) && verify_certificate(l, certificate)
            }
        };
        if !ok {
            return false;
        }
    }
    tc_entails(c.premises.iter().map(Premise::formula), &c.goal)
}

fn entails(prem: &[&(Formula, PremiseSource)], goal: &Formula) -> bool {
    let mut enc = Encoder::new();
    for (f, _) in prem {
        enc.assert(f);
    }
    enc.entails(goal)
}

/// A small subset of `prem` still entailing `goal`: premises not connected to
/// the goal through shared atoms are dropped, then the rest greedily.
pub(super) fn minimize(prem: &[(Formula, PremiseSource)], goal: &Formula) -> Vec<(Formula, PremiseSource)> {
    let atoms_list = |f: &Formula| {
        let mut v = Vec::new();
        atoms_of(f, &mut v);
        v
    };
    let prem_atoms: Vec<Vec<Formula>> = prem.iter().map(|(f, _)| atoms_list(f)).collect();
    let mut reach: HashSet<Formula> = atoms_list(goal).into_iter().collect();
    let mut keep = vec![false; prem.len()];
    loop {
        let mut grew = false;
        for (i, atoms) in prem_atoms.iter().enumerate() {
            if !keep[i] && (atoms.is_empty() || atoms.iter().any(|a| reach.contains(a))) {
                keep[i] = true;
                reach.extend(atoms.iter().cloned());
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let mut cur: Vec<&(Formula, PremiseSource)> = prem.iter().zip(&keep).filter(|(_, &k)| k).map(|(p, _)| p).collect();
    if !entails(&cur, goal) {
        cur = prem.iter().collect();
    }
    let mut i = cur.len();
    while i > 0 {
        i -= 1;
        let mut trial = cur.clone();
        trial.remove(i);
        if entails(&trial, goal) {
            cur = trial;
        }
    }
    cur.into_iter().cloned().collect()
}
