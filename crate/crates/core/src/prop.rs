//! Propositional layer: formulas viewed truth-functionally, with variables and
//! boxed subformulas (or any other opaque node) as atoms.
//!
//! `tc_entails(Γ, A)` decides whether A is a tautological consequence of Γ via
//! a Tseitin encoding handed to the CDCL solver.

use crate::formula::{Formula, Kind};
use crate::sat::{Lit, Solver};
use std::collections::HashMap;
use std::hash::Hash;

/// The truth-functional shape of a node.
pub enum Shape<'a, T> {
    Const(bool),
    Atom,
    Not(&'a T),
    And(&'a T, &'a T),
    Or(&'a T, &'a T),
    Imp(&'a T, &'a T),
}

/// Anything that can be read as a propositional formula over opaque atoms.
pub trait PropView: Clone + Eq + Hash {
    fn shape(&self) -> Shape<'_, Self>;
}

impl PropView for Formula {
    fn shape(&self) -> Shape<'_, Formula> {
        match self.kind() {
            Kind::Bot => Shape::Const(false),
            Kind::Top => Shape::Const(true),
            Kind::Var(_) | Kind::Box(_) => Shape::Atom,
            Kind::Not(a) => Shape::Not(a),
            Kind::And(a, b) => Shape::And(a, b),
            Kind::Or(a, b) => Shape::Or(a, b),
            Kind::Imp(a, b) => Shape::Imp(a, b),
        }
    }
}

/// Propositional formulas over numbered atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PropFormula {
    Const(bool),
    Atom(usize),
    Not(Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
    Imp(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn eval(&self, v: &dyn Fn(usize) -> bool) -> bool {
        match self {
            PropFormula::Const(b) => *b,
            PropFormula::Atom(i) => v(*i),
            PropFormula::Not(a) => !a.eval(v),
            PropFormula::And(a, b) => a.eval(v) && b.eval(v),
            PropFormula::Or(a, b) => a.eval(v) || b.eval(v),
            PropFormula::Imp(a, b) => !a.eval(v) || b.eval(v),
        }
    }
}

/// Bijection between atoms and atom indices, in order of first occurrence.
#[derive(Clone, Debug)]
pub struct PropAtomMap<T> {
    index: HashMap<T, usize>,
    atoms: Vec<T>,
}

impl<T: PropView> Default for PropAtomMap<T> {
    fn default() -> Self {
        PropAtomMap { index: HashMap::new(), atoms: Vec::new() }
    }
}

impl<T: PropView> PropAtomMap<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn index_of(&mut self, atom: &T) -> usize {
        if let Some(&i) = self.index.get(atom) {
            return i;
        }
        let i = self.atoms.len();
        self.atoms.push(atom.clone());
        self.index.insert(atom.clone(), i);
        i
    }

    pub fn atoms(&self) -> &[T] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// The translation I: atoms become numbered propositional atoms, connectives
/// are kept.
pub fn translate<T: PropView>(f: &T, map: &mut PropAtomMap<T>) -> PropFormula {
    let bx = |g: &T, map: &mut PropAtomMap<T>| Box::new(translate(g, map));
    match f.shape() {
        Shape::Const(b) => PropFormula::Const(b),
        Shape::Atom => PropFormula::Atom(map.index_of(f)),
        Shape::Not(a) => PropFormula::Not(bx(a, map)),
        Shape::And(a, b) => PropFormula::And(bx(a, map), bx(b, map)),
        Shape::Or(a, b) => PropFormula::Or(bx(a, map), bx(b, map)),
        Shape::Imp(a, b) => PropFormula::Imp(bx(a, map), bx(b, map)),
    }
}

/// Atoms of a formula, in order of first occurrence.
pub fn atoms_of<T: PropView>(f: &T, out: &mut Vec<T>) {
    match f.shape() {
        Shape::Const(_) => {}
        Shape::Atom => {
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
        Shape::Not(a) => atoms_of(a, out),
        Shape::And(a, b) | Shape::Or(a, b) | Shape::Imp(a, b) => {
            atoms_of(a, out);
            atoms_of(b, out);
        }
    }
}

/// Truth value of `f` when atoms are valued by `v`.
pub fn eval<T: PropView>(f: &T, v: &mut dyn FnMut(&T) -> bool) -> bool {
    match f.shape() {
        Shape::Const(b) => b,
        Shape::Atom => v(f),
        Shape::Not(a) => !eval(a, v),
        Shape::And(a, b) => eval(a, v) && eval(b, v),
        Shape::Or(a, b) => eval(a, v) || eval(b, v),
        Shape::Imp(a, b) => !eval(a, v) || eval(b, v),
    }
}

/// Incremental Tseitin encoder around a SAT solver. Equal subformulas share a
/// literal; atoms get fresh solver variables on first use.
pub struct Encoder<T: PropView> {
    pub solver: Solver,
    lits: HashMap<T, Lit>,
    atoms: HashMap<T, u32>,
    truth: Option<Lit>,
}

impl<T: PropView> Default for Encoder<T> {
    fn default() -> Self {
        Encoder { solver: Solver::new(), lits: HashMap::new(), atoms: HashMap::new(), truth: None }
    }
}

impl<T: PropView> Encoder<T> {
    pub fn new() -> Self {
        Self::default()
    }

    fn truth(&mut self) -> Lit {
        if let Some(t) = self.truth {
            return t;
        }
        let t = Lit::pos(self.solver.new_var());
        self.solver.add_clause(&[t]);
        self.truth = Some(t);
        t
    }

    /// The solver variable of an atom, allocating it if needed.
    pub fn atom(&mut self, a: &T) -> u32 {
        if let Some(&v) = self.atoms.get(a) {
            return v;
        }
        let v = self.solver.new_var();
        self.atoms.insert(a.clone(), v);
        v
    }

    /// Atoms seen so far.
    pub fn known_atom(&self, a: &T) -> Option<u32> {
        self.atoms.get(a).copied()
    }

    /// A literal equivalent to `f` under the definitional clauses added.
    pub fn lit(&mut self, f: &T) -> Lit {
        if let Some(&l) = self.lits.get(f) {
            return l;
        }
        let l = match f.shape() {
            Shape::Const(b) => {
                let t = self.truth();
                if b {
                    t
                } else {
                    !t
                }
            }
            Shape::Atom => Lit::pos(self.atom(f)),
            Shape::Not(a) => !self.lit(a),
            Shape::And(a, b) => {
                let (x, y) = (self.lit(a), self.lit(b));
                let z = Lit::pos(self.solver.new_var());
                self.solver.add_clause(&[!z, x]);
                self.solver.add_clause(&[!z, y]);
                self.solver.add_clause(&[z, !x, !y]);
                z
            }
            Shape::Or(a, b) => {
                let (x, y) = (self.lit(a), self.lit(b));
                let z = Lit::pos(self.solver.new_var());
                self.solver.add_clause(&[z, !x]);
                self.solver.add_clause(&[z, !y]);
                self.solver.add_clause(&[!z, x, y]);
                z
            }
            Shape::Imp(a, b) => {
                let (x, y) = (self.lit(a), self.lit(b));
                let z = Lit::pos(self.solver.new_var());
                self.solver.add_clause(&[z, x]);
                self.solver.add_clause(&[z, !y]);
                self.solver.add_clause(&[!z, !x, y]);
                z
            }
        };
        self.lits.insert(f.clone(), l);
        l
    }

    /// Adds `f` as a hard constraint.
    pub fn assert(&mut self, f: &T) {
        let l = self.lit(f);
        self.solver.add_clause(&[l]);
    }

    pub fn satisfiable_with(&mut self, assumptions: &[Lit]) -> bool {
        self.solver.solve_with(assumptions)
    }

    /// Whether `goal` follows from everything asserted so far.
    pub fn entails(&mut self, goal: &T) -> bool {
        let l = self.lit(goal);
        !self.solver.solve_with(&[!l])
    }

    /// Truth value of an atom in the last model.
    pub fn model_value(&self, a: &T) -> Option<bool> {
        self.atoms.get(a).and_then(|&v| self.solver.value(v))
    }
}

/// Γ ⊢ᵗ A: A is a tautological consequence of Γ.
pub fn tc_entails<'a, T: PropView + 'a>(premises: impl IntoIterator<Item = &'a T>, goal: &T) -> bool {
    let mut enc = Encoder::new();
    for p in premises {
        enc.assert(p);
    }
    enc.entails(goal)
}

/// Propositional satisfiability of a finite set.
pub fn tc_consistent<'a, T: PropView + 'a>(fs: impl IntoIterator<Item = &'a T>) -> bool {
    let mut enc = Encoder::new();
    for f in fs {
        enc.assert(f);
    }
    enc.satisfiable_with(&[])
}

pub fn is_tautology<T: PropView>(f: &T) -> bool {
    tc_entails(std::iter::empty::<&T>(), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    // Exhaustive truth-table oracle.
    fn brute_entails(premises: &[Formula], goal: &Formula) -> bool {
        let mut map = PropAtomMap::new();
        let ps: Vec<PropFormula> = premises.iter().map(|p| translate(p, &mut map)).collect();
        let g = translate(goal, &mut map);
        let n = map.len();
        assert!(n <= 12);
        (0..(1u32 << n)).all(|m| {
            let v = |i: usize| (m >> i) & 1 == 1;
            !ps.iter().all(|p| p.eval(&v)) || g.eval(&v)
        })
    }

    #[test]
    fn box_formulas_are_opaque_atoms() {
        assert!(is_tautology(&parse("[]p | ~[]p")));
        assert!(!is_tautology(&parse("[]p -> []~~p")));
        assert!(tc_entails(&[parse("[](p & q)")], &parse("[](p & q) | r")));
        assert!(!tc_entails(&[parse("[](p & q)")], &parse("[]p")));
        assert!(tc_entails(&[parse("false")], &parse("p")));
        assert!(is_tautology(&parse("true")));
        assert!(!tc_consistent(&[parse("[]p"), parse("~[]p")]));
    }

    #[test]
    fn translation_numbers_atoms_by_first_occurrence() {
        let mut map = PropAtomMap::new();
        let t = translate(&parse("[]q -> p & []q"), &mut map);
        assert_eq!(map.atoms(), &[parse("[]q"), parse("p")]);
        assert_eq!(
            t,
            PropFormula::Imp(
                Box::new(PropFormula::Atom(0)),
                Box::new(PropFormula::And(Box::new(PropFormula::Atom(1)), Box::new(PropFormula::Atom(0))))
            )
        );
    }

    #[test]
    fn agrees_with_truth_tables() {
        let cases = [
            (vec!["p -> q", "q -> r"], "p -> r"),
            (vec!["p | q", "~p"], "q"),
            (vec!["[]p -> []q", "[]q -> []r"], "[]p -> []r"),
            (vec![], "((p -> q) -> p) -> p"),
            (vec![], "(p -> q) -> p"),
            (vec!["~(a & b)", "a | c", "b | c"], "c | (a & ~b) | (b & ~a)"),
            (vec!["~([]a & []~a)", "[]~a"], "~[]a"),
        ];
        for (ps, g) in cases {
            let ps: Vec<Formula> = ps.iter().map(|s| parse(s)).collect();
            let g = parse(g);
            assert_eq!(tc_entails(&ps, &g), brute_entails(&ps, &g), "{ps:?} |- {g}");
        }
    }
}
