//! Thin wrapper over the `varisat` CDCL solver: `u32` variables, literals
//! with cheap negation, solving under assumptions and model lookup.

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn pos(v: u32) -> Lit {
        Lit(v << 1)
    }

    pub fn neg(v: u32) -> Lit {
        Lit((v << 1) | 1)
    }

    pub fn new(v: u32, positive: bool) -> Lit {
        if positive {
            Lit::pos(v)
        } else {
            Lit::neg(v)
        }
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    fn raw(self) -> varisat::Lit {
        varisat::Lit::from_index(self.var() as usize, self.is_positive())
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

pub struct Solver {
    inner: varisat::Solver<'static>,
    vars: u32,
    /// Per variable, its value in the last model found.
    model: Vec<Option<bool>>,
    clause: Vec<varisat::Lit>,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

impl Solver {
    pub fn new() -> Solver {
        Solver { inner: varisat::Solver::new(), vars: 0, model: Vec::new(), clause: Vec::new() }
    }

    pub fn num_vars(&self) -> u32 {
        self.vars
    }

    pub fn new_var(&mut self) -> u32 {
        self.vars += 1;
        self.vars - 1
    }

    /// Value of a variable in the last model found.
    pub fn value(&self, v: u32) -> Option<bool> {
        self.model.get(v as usize).copied().flatten()
    }

    pub fn lit_true(&self, l: Lit) -> bool {
        self.value(l.var()) == Some(l.is_positive())
    }

    pub fn add_clause(&mut self, lits: &[Lit]) {
        use varisat::ExtendFormula;
        self.clause.clear();
        self.clause.extend(lits.iter().map(|l| l.raw()));
        self.inner.add_clause(&self.clause);
    }

    pub fn solve(&mut self) -> bool {
        self.solve_with(&[])
    }

    /// Decides satisfiability of the clauses together with the assumptions.
    /// On success the model is readable through [`Solver::value`].
    pub fn solve_with(&mut self, assumptions: &[Lit]) -> bool {
        let raw: Vec<varisat::Lit> = assumptions.iter().map(|l| l.raw()).collect();
        self.inner.assume(&raw);
        let sat = self.inner.solve().expect("no proof output or interruption is configured");
        self.model.clear();
        if sat {
            // Variables in no clause are unconstrained; report them false.
            self.model.resize(self.vars as usize, Some(false));
            for l in self.inner.model().expect("satisfiable") {
                if let Some(slot) = self.model.get_mut(l.index()) {
                    *slot = Some(l.is_positive());
                }
            }
        }
        sat
    }
}
