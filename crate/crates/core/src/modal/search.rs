//! Bounded Kripke model search by reduction to propositional SAT.
//!
//! For `n` worlds the variables are `R(i,j)`, `V(i,p)` and one Tseitin
//! literal per (subformula, world), memoized so that shared subformulas
//! are encoded once. Sizes are tried in increasing order, so the first
//! model found is a smallest one.

use std::collections::HashMap;

use serde::Serialize;
use varisat::{ExtendFormula, Lit, Solver};

use super::{KripkeModel, Logic, ModalError, ModalFormula as F};
use crate::sat::Cnf;

/// Largest frame the search will try.
pub const MAX_SEARCH_WORLDS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum ModelSearch {
    /// World 0 satisfies the formula.
    Model { model: KripkeModel },
    /// No model with at most this many worlds.
    NoneUpTo { worlds: usize },
}

struct Encoder<'a> {
    cnf: Cnf,
    worlds: usize,
    atoms: usize,
    memo: HashMap<(&'a F, usize), i32>,
    falsum: i32,
}

impl<'a> Encoder<'a> {
    fn new(worlds: usize, atoms: usize) -> Self {
        let mut cnf = Cnf::new(worlds * worlds + worlds * atoms);
        let falsum = cnf.fresh();
        cnf.clauses.push(vec![-falsum]);
        Encoder {
            cnf,
            worlds,
            atoms,
            memo: HashMap::new(),
            falsum,
        }
    }

    fn r(&self, i: usize, j: usize) -> i32 {
        Cnf::lit(i * self.worlds + j)
    }

    fn v(&self, w: usize, p: u32) -> i32 {
        Cnf::lit(self.worlds * self.worlds + w * self.atoms + p as usize)
    }

    fn frame(&mut self, logic: Logic) {
        let n = self.worlds;
        if logic.irreflexive() {
            for i in 0..n {
                let l = self.r(i, i);
                self.cnf.clauses.push(vec![-l]);
            }
        }
        if logic.transitive() {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let c = vec![-self.r(i, j), -self.r(j, k), self.r(i, k)];
                        self.cnf.clauses.push(c);
                    }
                }
            }
        }
    }

    /// Literal for `f` holding at `w`; `f` is normalized.
    fn lit(&mut self, f: &'a F, w: usize) -> i32 {
        if let Some(&l) = self.memo.get(&(f, w)) {
            return l;
        }
        let l = match f {
            F::Const(b) => {
                if *b {
                    -self.falsum
                } else {
                    self.falsum
                }
            }
            F::Atom(p) => self.v(w, *p),
            F::Not(a) => -self.lit(a, w),
            F::Implies(a, b) => {
                let la = self.lit(a, w);
                let lb = self.lit(b, w);
                let x = self.cnf.fresh();
                self.cnf.clauses.push(vec![-x, -la, lb]);
                self.cnf.clauses.push(vec![x, la]);
                self.cnf.clauses.push(vec![x, -lb]);
                x
            }
            F::Box(a) => {
                let x = self.cnf.fresh();
                let mut all = vec![x];
                for v in 0..self.worlds {
                    let rv = self.r(w, v);
                    let av = self.lit(a, v);
                    // x ∧ R(w,v) → a@v
                    self.cnf.clauses.push(vec![-x, -rv, av]);
                    // y ↔ (R(w,v) → a@v)
                    let y = self.cnf.fresh();
                    self.cnf.clauses.push(vec![-y, -rv, av]);
                    self.cnf.clauses.push(vec![y, rv]);
                    self.cnf.clauses.push(vec![y, -av]);
                    all.push(-y);
                }
                self.cnf.clauses.push(all);
                x
            }
            _ => unreachable!("search works on normalized formulas"),
        };
        self.memo.insert((f, w), l);
        l
    }

    fn decode(&self, logic: Logic, assignment: &[bool]) -> KripkeModel {
        let n = self.worlds;
        let truth = |l: i32| assignment[l as usize - 1];
        let relation = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| truth(self.r(i, j)))
            .collect();
        let valuation = (0..n)
            .map(|w| (0..self.atoms as u32).filter(|&p| truth(self.v(w, p))).collect())
            .collect();
        KripkeModel {
            logic,
            worlds: n,
            relation,
            valuation,
        }
    }
}

/// CDCL solve; returns the value of every variable.
fn solve(cnf: &Cnf) -> Option<Vec<bool>> {
    let mut solver = Solver::new();
    for clause in &cnf.clauses {
        let lits: Vec<Lit> = clause.iter().map(|&l| Lit::from_dimacs(l as isize)).collect();
        solver.add_clause(&lits);
    }
    if !solver.solve().expect("in-memory solve cannot fail") {
        return None;
    }
    let mut values = vec![false; cnf.vars];
    for lit in solver.model().unwrap_or_default() {
        let i = lit.index();
        if i < values.len() {
            values[i] = lit.is_positive();
        }
    }
    Some(values)
}

/// Searches for a model of `f` in the logic's frame class with at most
/// `max_worlds` worlds. Any model returned has been re-checked by direct
/// evaluation.
pub fn find_model(f: &F, logic: Logic, max_worlds: usize) -> Result<ModelSearch, ModalError> {
    if max_worlds > MAX_SEARCH_WORLDS {
        return Err(ModalError::WorldBound);
    }
    f.check_atoms()?;
    let normal = f.normalize();
    let atoms = f.atom_bound();
    for n in 1..=max_worlds {
        let mut enc = Encoder::new(n, atoms);
        enc.frame(logic);
        let root = enc.lit(&normal, 0);
        enc.cnf.clauses.push(vec![root]);
        if let Some(assignment) = solve(&enc.cnf) {
            let model = enc.decode(logic, &assignment);
            if !model.frame_ok() || !model.eval(0, f) {
                return Err(ModalError::Unsound(format!(
                    "decoded {n}-world model does not satisfy {f} in {logic}"
                )));
            }
            return Ok(ModelSearch::Model { model });
        }
    }
    Ok(ModelSearch::NoneUpTo { worlds: max_worlds })
}
