//! The staged constructions of h and g.
//!
//! Prefix convention: the switch decision at stage s (h(s+1)) reads
//! P_s = {g(0), …, g(s−1)} ∪ {stream(s)}, i.e. the theory's outputs up to and
//! including stage s. The X-set and the bookkeeping facts read
//! P_{s−1} = {g(0), …, g(s−1)}.

use super::interp::{is_image, preimage};
use super::library::Library;
use super::sformula::{Marker, PrKind, SFormula, SGrammar};
use super::stream::TheoryStream;
use super::SandboxError;
use crate::formula::Formula;
use crate::logic::Logic;
use crate::prop::{is_tautology, Encoder};
use crate::semantics::WorldId;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Trigger {
    /// The condition Φ(s) holds with witness ψ and ★-iteration (σ₀, …, σ_{r−1}).
    Phi { psi: SFormula, r: usize, iteration: Vec<SFormula>, world: WorldId, model: usize },
    /// J_s became nonempty; `world` = min J_s lies in block `model`.
    J { world: WorldId, model: usize },
}

impl Trigger {
    pub fn world(&self) -> WorldId {
        match self {
            Trigger::Phi { world, .. } | Trigger::J { world, .. } => *world,
        }
    }
}

/// Layout of the outputs after the switch stage s: u scheduled outputs,
/// then l elements of X, then ξ₀, ξ₁, … from stage `start` = s + u + l.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TailInfo {
    pub u: u64,
    pub l: u64,
    pub start: u64,
    /// The last ξ_t with a stage below the horizon.
    pub last: Option<SFormula>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StagedTrace {
    pub logic: Logic,
    pub horizon: u64,
    /// h(0), …, h(horizon).
    pub h: Vec<u64>,
    /// g(0), …, g(horizon − 1); `None` is the skip code 0.
    pub g: Vec<Option<SFormula>>,
    /// The stage s with h(s) = 0 ≠ h(s+1).
    pub switch_stage: Option<u64>,
    pub trigger: Option<Trigger>,
    pub tail: Option<TailInfo>,
}

/// Outputs collected so far, with an incremental consistency check.
struct Prefix {
    enc: Encoder<SFormula>,
    consistent: bool,
    members: HashSet<SFormula>,
    max: Option<SFormula>,
    /// Arguments ψ of outputs ¬Pr^†[ψ].
    neg_dagger: BTreeSet<SFormula>,
    lambdas: BTreeSet<u64>,
    /// (is β, B, j) for markers α_B(j̄) / β_B(j̄).
    instances: BTreeSet<(bool, Formula, u64)>,
}

impl Prefix {
    fn new() -> Self {
        Prefix {
            enc: Encoder::new(),
            consistent: true,
            members: HashSet::new(),
            max: None,
            neg_dagger: BTreeSet::new(),
            lambdas: BTreeSet::new(),
            instances: BTreeSet::new(),
        }
    }

    fn add(&mut self, o: &SFormula) {
        if !self.members.insert(o.clone()) {
            return;
        }
        if self.max.as_ref().is_none_or(|m| o > m) {
            self.max = Some(o.clone());
        }
        if let Some(psi) = o.neg_dagger_arg() {
            self.neg_dagger.insert(psi.clone());
        }
        let mut atoms = Vec::new();
        o.prop_atoms(&mut atoms);
        for a in atoms {
            if let super::sformula::SKind::Marker(m) = a.kind() {
                match m {
                    Marker::Lambda(j) => {
                        self.lambdas.insert(*j);
                    }
                    Marker::Alpha(b, j) => {
                        self.instances.insert((false, b.clone(), *j));
                    }
                    Marker::Beta(b, j) => {
                        self.instances.insert((true, b.clone(), *j));
                    }
                    Marker::AlphaAll(_) | Marker::BetaAll(_) => {}
                }
            }
        }
        // Tautologies change neither consistency nor consequences.
        if self.consistent && !is_tautology(o) {
            self.enc.assert(o);
            self.consistent = self.enc.satisfiable_with(&[]);
        }
    }

    fn contains(&self, f: &SFormula) -> bool {
        self.members.contains(f)
    }

    fn in_f(&self, f: &SFormula) -> bool {
        self.max.as_ref().is_some_and(|m| f <= m)
    }
}

/// A witness (ψ, r, (σ₀, …, σ_{r−1})) of Φ(s).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiWitness {
    pub psi: SFormula,
    pub iteration: Vec<SFormula>,
}

/// The ★-iteration ending in `top` obtained by peeling Pr^† off ★-forms:
/// σ_{n} = top and σ_{i−1} = χ whenever σ_i★ = Pr^†[χ]. Returned as
/// (σ₀, …, σ_n); σ₀★ is not a Pr^†-literal.
pub fn unwind(top: &SFormula) -> Vec<SFormula> {
    let mut out = vec![top.clone()];
    loop {
        let next = out.last().expect("nonempty").star().pr_arg(PrKind::Dagger).cloned();
        match next {
            Some(x) => out.push(x),
            None => break,
        }
    }
    out.reverse();
    out
}

/// Φ for the outputs `members` (bounded by their largest code). For each ψ
/// (in code order) the ★-iteration is forced: σ_{r−1}★ must be (¬ψ)★ and the
/// Pr^† layers of it fix the rest, so taking σ_{r−1} = (¬ψ)★ loses nothing.
fn phi(p: &Prefix) -> Option<PhiWitness> {
    for psi in &p.neg_dagger {
        if is_image(psi) || !p.in_f(psi) {
            continue;
        }
        let tau = SFormula::neg(psi.clone()).star();
        if !p.in_f(&tau) {
            continue;
        }
        let iteration = unwind(&tau);
        debug_assert_eq!(psi.star(), SFormula::neg(tau.clone()).star());
        if iteration.iter().any(|s| p.contains(&s.star())) {
            continue;
        }
        return Some(PhiWitness { psi: psi.clone(), iteration });
    }
    None
}

/// Φ(s) for the given outputs g(0..s) and the theory's output at stage s.
pub fn check_phi<'a>(
    prefix: impl IntoIterator<Item = &'a SFormula>,
    current: Option<&'a SFormula>,
) -> Option<PhiWitness> {
    let mut p = Prefix::new();
    prefix.into_iter().chain(current).for_each(|o| p.add(o));
    phi(&p)
}

/// J_s, or `None` for "every j ≥ 1" (inconsistent prefix).
fn j_set(p: &mut Prefix, lib: &Library) -> Option<BTreeSet<u64>> {
    if !p.consistent {
        return None;
    }
    let mut out = BTreeSet::new();
    for &j in &p.lambdas {
        if j > 0 && p.enc.entails(&SFormula::neg(SFormula::lambda(j))) {
            out.insert(j);
        }
    }
    for (beta, b, j) in &p.instances {
        let j = *j;
        if j == 0 || out.contains(&j) || !lib.sub_of_block(j, b) {
            continue;
        }
        let (all, inst) = if *beta {
            (Marker::BetaAll(b.clone()), Marker::Beta(b.clone(), j))
        } else {
            (Marker::AlphaAll(b.clone()), Marker::Alpha(b.clone(), j))
        };
        let goal = SFormula::and(
            SFormula::marker(all),
            SFormula::imp(SFormula::marker(inst), SFormula::neg(SFormula::lambda(j))),
        );
        if p.enc.entails(&goal) {
            out.insert(j);
        }
    }
    Some(out)
}

/// J_s for the given outputs g(0..s) and the theory's output at stage s;
/// `None` stands for all of ω∖{0}.
pub fn compute_j<'a>(
    prefix: impl IntoIterator<Item = &'a SFormula>,
    current: Option<&'a SFormula>,
    lib: &Library,
) -> Option<BTreeSet<u64>> {
    let mut p = Prefix::new();
    prefix.into_iter().chain(current).for_each(|o| p.add(o));
    j_set(&mut p, lib)
}

/// X: the formulas (¬φ)★ for ¬Pr^†[φ] among `outputs`, φ outside the image
/// and φ★ of the form ¬Pr^†[χ]; in code order.
pub fn x_set<'a>(outputs: impl IntoIterator<Item = &'a SFormula>) -> Vec<SFormula> {
    let mut out = BTreeSet::new();
    for o in outputs {
        let Some(phi) = o.neg_dagger_arg() else { continue };
        if !is_image(phi) && phi.star().neg_dagger_arg().is_some() {
            out.insert(SFormula::neg(phi.clone()).star());
        }
    }
    out.into_iter().collect()
}

fn check_logic(l: Logic, allowed: [Logic; 2]) -> Result<(), SandboxError> {
    if allowed.contains(&l) {
        Ok(())
    } else {
        Err(SandboxError::UnsupportedLogic(l))
    }
}

/// The construction of h₀/g₀ (ND, ND4): Φ-triggered Case A, J-triggered
/// Case B, then X and the filtered tail.
pub fn run_staged(l: Logic, stream: &TheoryStream, lib: &Library, horizon: u64) -> Result<StagedTrace, SandboxError> {
    check_logic(l, [Logic::ND, Logic::ND4])?;
    run(l, stream, lib, horizon, true)
}

/// The construction of h₁/g₁ (NP, NP4): J-triggered only, tail right after
/// the switch.
pub fn run_staged_simple(
    l: Logic,
    stream: &TheoryStream,
    lib: &Library,
    horizon: u64,
) -> Result<StagedTrace, SandboxError> {
    check_logic(l, [Logic::NP, Logic::NP4])?;
    run(l, stream, lib, horizon, false)
}

/// Dispatches on the logic.
pub fn simulate(l: Logic, stream: &TheoryStream, lib: &Library, horizon: u64) -> Result<StagedTrace, SandboxError> {
    match l {
        Logic::ND | Logic::ND4 => run_staged(l, stream, lib, horizon),
        Logic::NP | Logic::NP4 => run_staged_simple(l, stream, lib, horizon),
        _ => Err(SandboxError::UnsupportedLogic(l)),
    }
}

fn run(
    l: Logic,
    stream: &TheoryStream,
    lib: &Library,
    horizon: u64,
    with_phi: bool,
) -> Result<StagedTrace, SandboxError> {
    let mut p = Prefix::new();
    let mut h = vec![0u64];
    let mut g: Vec<Option<SFormula>> = Vec::new();
    let mut s = 0;
    let mut trigger = None;
    while s < horizon {
        let current = stream.output(s);
        if let Some(c) = &current {
            p.add(c);
        }
        if with_phi {
            if let Some(w) = phi(&p) {
                let (k, _) = lib.locate(1).ok_or(SandboxError::LibraryExhausted { world: 1, blocks: lib.len() })?;
                trigger =
                    Some(Trigger::Phi { r: w.iteration.len(), psi: w.psi, iteration: w.iteration, world: 1, model: k });
                break;
            }
        }
        let j = j_set(&mut p, lib);
        let min = match &j {
            None => Some(1),
            Some(set) => set.first().copied(),
        };
        if let Some(i) = min {
            let (k, _) = lib.locate(i).ok_or(SandboxError::LibraryExhausted { world: i, blocks: lib.len() })?;
            trigger = Some(Trigger::J { world: i, model: k });
            break;
        }
        h.push(0);
        g.push(current);
        s += 1;
    }
    let Some(trig) = trigger else {
        return Ok(StagedTrace { logic: l, horizon, h, g, switch_stage: None, trigger: None, tail: None });
    };

    let i = trig.world();
    h.resize(horizon as usize + 1, i);
    let mut scheduled: Vec<SFormula> = Vec::new();
    if let Trigger::Phi { iteration, .. } = &trig {
        scheduled.extend(iteration.iter().rev().map(|sig| SFormula::neg(sig.clone()).star()));
    }
    let u = scheduled.len() as u64;
    if with_phi {
        scheduled.extend(x_set(g.iter().flatten()));
    }
    let l_len = scheduled.len() as u64 - u;
    let start = s + u + l_len;
    for o in scheduled {
        if (g.len() as u64) < horizon {
            g.push(Some(o));
        }
    }
    let mut last = None;
    if (g.len() as u64) < horizon {
        let grammar = SGrammar::new();
        for xi in grammar.enumerate() {
            if g.len() as u64 >= horizon {
                break;
            }
            let out = match preimage(&xi) {
                Some(b) if !lib.forces_box(i, &b)? => None,
                _ => Some(xi.clone()),
            };
            g.push(out);
            last = Some(xi);
        }
    }
    Ok(StagedTrace {
        logic: l,
        horizon,
        h,
        g,
        switch_stage: Some(s),
        trigger: Some(trig),
        tail: Some(TailInfo { u, l: l_len, start, last }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sandbox::sformula::sparse;
    use crate::sandbox::stream::StreamDefault;

    fn outs(v: &[&str]) -> Vec<SFormula> {
        v.iter().map(|s| sparse(s)).collect()
    }

    #[test]
    fn phi_needs_a_negated_literal() {
        let o = outs(&["a", "PrA[a]", "Pr[b] -> c"]);
        assert_eq!(check_phi(&o, None), None);
    }

    #[test]
    fn phi_chain_of_length_two() {
        // ψ = ~Pr[a]: (¬ψ)★ = Pr[a], so σ₁ = Pr[a] and σ₀ = a.
        let o = outs(&["~Pr[~Pr[a]]"]);
        let w = check_phi(&o, None).unwrap();
        assert_eq!(w.psi, sparse("~Pr[a]"));
        assert_eq!(w.iteration, outs(&["a", "Pr[a]"]));
        assert!(w.iteration.windows(2).all(|p| p[0] < p[1]));
        // Condition 6 fails once some σ_j★ is an output.
        assert_eq!(check_phi(&outs(&["~Pr[~Pr[a]]", "a"]), None), None);
        // Condition 3: ψ in the image.
        assert_eq!(check_phi(&outs(&["~Pr[~Pr[f:p]]"]), None), None);
    }

    #[test]
    fn phi_single_step() {
        // ψ = a: σ₀ = (¬a)★ = ~a.
        let w = check_phi(&outs(&["~Pr[a]"]), None).unwrap();
        assert_eq!((w.psi, w.iteration), (sparse("a"), outs(&["~a"])));
        assert_eq!(check_phi(&outs(&["~Pr[a]", "~a"]), None), None);
    }

    #[test]
    fn j_examples() {
        let lib = Library::generate(Logic::ND, 3).unwrap();
        assert_eq!(compute_j(&[], None, &lib), Some(BTreeSet::new()));
        let o = outs(&["q", "~lambda(3)"]);
        assert_eq!(compute_j(&o, None, &lib), Some(BTreeSet::from([3])));
        // α-disjunct: A_2 = []false, world 3 ∈ W_2, B = false ∈ Sub(A_2).
        let o = outs(&["alphaAll[false]", "alpha[false](3) -> ~lambda(3)"]);
        assert_eq!(compute_j(&o, None, &lib), Some(BTreeSet::from([3])));
        // B = p is not a subformula of A_2.
        let o = outs(&["alphaAll[p]", "alpha[p](3) -> ~lambda(3)"]);
        assert_eq!(compute_j(&o, None, &lib), Some(BTreeSet::new()));
        assert_eq!(compute_j(&outs(&["a", "~a"]), None, &lib), None);
    }

    #[test]
    fn tautology_stream_never_switches() {
        let lib = Library::generate(Logic::ND4, 3).unwrap();
        let st = TheoryStream::tautologies();
        let t = run_staged(Logic::ND4, &st, &lib, 200).unwrap();
        assert!(t.h.iter().all(|&x| x == 0));
        assert!(t.g.iter().enumerate().all(|(s, o)| *o == st.output(s as u64)));
        assert_eq!(t.switch_stage, None);
    }

    #[test]
    fn case_a_schedule() {
        let lib = Library::generate(Logic::ND, 3).unwrap();
        let st = TheoryStream::scripted([(4, sparse("~Pr[~Pr[a]]"))], StreamDefault::Tautologies);
        let t = run_staged(Logic::ND, &st, &lib, 40).unwrap();
        assert_eq!(t.switch_stage, Some(4));
        assert_eq!(t.g[4], Some(sparse("~Pr[a]")));
        assert_eq!(t.g[5], Some(sparse("~a")));
        assert_eq!(t.h[4], 0);
        assert!(t.h[5..].iter().all(|&x| x == 1));
        let tail = t.tail.unwrap();
        assert_eq!((tail.u, tail.l, tail.start), (2, 0, 6));
    }

    #[test]
    fn x_set_members() {
        // φ = ~~~Pr[c]: φ★ = ~Pr[c], so (¬φ)★ = Pr[c] joins X.
        let o = outs(&["~Pr[~~~Pr[c]]", "~Pr[d]", "~Pr[~Pr[f:p]]"]);
        assert_eq!(x_set(&o), outs(&["Pr[c]"]));
    }

    #[test]
    fn unsupported_logics() {
        let lib = Library::generate(Logic::N, 1).unwrap();
        assert!(matches!(
            run_staged(Logic::NP, &TheoryStream::default(), &lib, 1),
            Err(SandboxError::UnsupportedLogic(Logic::NP))
        ));
        assert!(matches!(
            simulate(Logic::N4, &TheoryStream::default(), &lib, 1),
            Err(SandboxError::UnsupportedLogic(Logic::N4))
        ));
    }

    #[test]
    fn exhausted_library() {
        let lib = Library::generate(Logic::NP, 3).unwrap();
        let st = TheoryStream::scripted([(0, sparse("~lambda(99)"))], StreamDefault::Skip);
        assert!(matches!(
            run_staged_simple(Logic::NP, &st, &lib, 5),
            Err(SandboxError::LibraryExhausted { world: 99, .. })
        ));
    }
}
