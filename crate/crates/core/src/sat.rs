//! Propositional satisfiability: truth tables for small atom sets, and a
//! DPLL solver over a Tseitin encoding for everything else.

/// Propositional formula over atoms numbered from 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Prop {
    Const(bool),
    Atom(usize),
    Not(Box<Prop>),
    And(Vec<Prop>),
    Or(Vec<Prop>),
    Implies(Box<Prop>, Box<Prop>),
    Iff(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn not(p: Prop) -> Prop {
        Prop::Not(Box::new(p))
    }

    pub fn implies(a: Prop, b: Prop) -> Prop {
        Prop::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Prop, b: Prop) -> Prop {
        Prop::Iff(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, v: &[bool]) -> bool {
        match self {
            Prop::Const(b) => *b,
            Prop::Atom(i) => v[*i],
            Prop::Not(p) => !p.eval(v),
            Prop::And(ps) => ps.iter().all(|p| p.eval(v)),
            Prop::Or(ps) => ps.iter().any(|p| p.eval(v)),
            Prop::Implies(a, b) => !a.eval(v) || b.eval(v),
            Prop::Iff(a, b) => a.eval(v) == b.eval(v),
        }
    }

    /// One more than the largest atom index.
    pub fn atom_bound(&self) -> usize {
        match self {
            Prop::Const(_) => 0,
            Prop::Atom(i) => i + 1,
            Prop::Not(p) => p.atom_bound(),
            Prop::And(ps) | Prop::Or(ps) => ps.iter().map(Prop::atom_bound).max().unwrap_or(0),
            Prop::Implies(a, b) | Prop::Iff(a, b) => a.atom_bound().max(b.atom_bound()),
        }
    }
}

/// Largest atom count the truth-table pass enumerates.
pub const TRUTH_TABLE_ATOMS: usize = 12;

fn atom_count(props: &[Prop]) -> usize {
    props.iter().map(Prop::atom_bound).max().unwrap_or(0)
}

/// Exhaustive search; `None` when there are more than 20 atoms.
pub fn truth_table_model(props: &[Prop]) -> Option<Option<Vec<bool>>> {
    let n = atom_count(props);
    if n > 20 {
        return None;
    }
    let mut v = vec![false; n];
    for bits in 0u32..(1 << n) {
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = bits >> i & 1 == 1;
        }
        if props.iter().all(|p| p.eval(&v)) {
            return Some(Some(v));
        }
    }
    Some(None)
}

/// A model of every formula in `props`, by truth table when the atom count
/// is small and by DPLL otherwise.
pub fn model(props: &[Prop]) -> Option<Vec<bool>> {
    if atom_count(props) <= TRUTH_TABLE_ATOMS {
        truth_table_model(props).expect("small atom count")
    } else {
        dpll_model(props)
    }
}

pub fn satisfiable(props: &[Prop]) -> bool {
    model(props).is_some()
}

/// `premises ⊨ goal`
pub fn entails(premises: &[Prop], goal: &Prop) -> bool {
    let mut all = premises.to_vec();
    all.push(Prop::not(goal.clone()));
    !satisfiable(&all)
}

/// Literals are `±(var + 1)`.
pub type Clause = Vec<i32>;

/// Clause set under construction; variables past the atoms are Tseitin
/// auxiliaries.
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Clause>,
}

impl Cnf {
    pub fn new(atoms: usize) -> Self {
        Cnf {
            vars: atoms,
            clauses: Vec::new(),
        }
    }

    pub fn fresh(&mut self) -> i32 {
        self.vars += 1;
        self.vars as i32
    }

    pub fn lit(atom: usize) -> i32 {
        atom as i32 + 1
    }

    /// A literal equivalent to `p`.
    pub fn define(&mut self, p: &Prop) -> i32 {
        match p {
            Prop::Atom(i) => Cnf::lit(*i),
            Prop::Not(q) => -self.define(q),
            Prop::Const(b) => {
                let x = self.fresh();
                self.clauses.push(vec![if *b { x } else { -x }]);
                x
            }
            Prop::And(ps) => {
                let ls: Vec<i32> = ps.iter().map(|q| self.define(q)).collect();
                let x = self.fresh();
                for &l in &ls {
                    self.clauses.push(vec![-x, l]);
                }
                let mut c: Clause = ls.iter().map(|l| -l).collect();
                c.push(x);
                self.clauses.push(c);
                x
            }
            Prop::Or(ps) => {
                let ls: Vec<i32> = ps.iter().map(|q| self.define(q)).collect();
                let x = self.fresh();
                for &l in &ls {
                    self.clauses.push(vec![x, -l]);
                }
                let mut c: Clause = ls;
                c.push(-x);
                self.clauses.push(c);
                x
            }
            Prop::Implies(a, b) => {
                let p = Prop::Or(vec![Prop::not((**a).clone()), (**b).clone()]);
                self.define(&p)
            }
            Prop::Iff(a, b) => {
                let la = self.define(a);
                let lb = self.define(b);
                let x = self.fresh();
                self.clauses.push(vec![-x, -la, lb]);
                self.clauses.push(vec![-x, la, -lb]);
                self.clauses.push(vec![x, la, lb]);
                self.clauses.push(vec![x, -la, -lb]);
                x
            }
        }
    }

    pub fn assert(&mut self, p: &Prop) {
        let l = self.define(p);
        self.clauses.push(vec![l]);
    }
}

fn dpll_model(props: &[Prop]) -> Option<Vec<bool>> {
    let atoms = atom_count(props);
    let mut cnf = Cnf::new(atoms);
    for p in props {
        cnf.assert(p);
    }
    solve(&cnf).map(|m| m[..atoms].to_vec())
}

/// DPLL with unit propagation. Returns a total assignment.
pub fn solve(cnf: &Cnf) -> Option<Vec<bool>> {
    let mut assign: Vec<Option<bool>> = vec![None; cnf.vars];
    if search(&cnf.clauses, &mut assign) {
        Some(assign.into_iter().map(|v| v.unwrap_or(false)).collect())
    } else {
        None
    }
}

fn value(assign: &[Option<bool>], lit: i32) -> Option<bool> {
    assign[lit.unsigned_abs() as usize - 1].map(|b| b == (lit > 0))
}

fn set(assign: &mut [Option<bool>], lit: i32, trail: &mut Vec<usize>) {
    let v = lit.unsigned_abs() as usize - 1;
    assign[v] = Some(lit > 0);
    trail.push(v);
}

/// Unit propagation to a fixpoint; false on conflict. Returns a branching
/// literal from a shortest open clause, or 0 when all clauses are satisfied.
fn propagate(clauses: &[Clause], assign: &mut [Option<bool>], trail: &mut Vec<usize>) -> Option<i32> {
    loop {
        let mut changed = false;
        let mut best: (usize, i32) = (usize::MAX, 0);
        for c in clauses {
            let mut open = 0;
            let mut last = 0;
            let mut sat = false;
            for &l in c {
                match value(assign, l) {
                    Some(true) => {
                        sat = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open += 1;
                        last = l;
                    }
                }
            }
            if sat {
                continue;
            }
            match open {
                0 => return None,
                1 => {
                    set(assign, last, trail);
                    changed = true;
                }
                n if n < best.0 => best = (n, last),
                _ => {}
            }
        }
        if !changed {
            return Some(best.1);
        }
    }
}

fn undo(assign: &mut [Option<bool>], trail: &mut Vec<usize>, mark: usize) {
    for v in trail.drain(mark..) {
        assign[v] = None;
    }
}

fn search(clauses: &[Clause], assign: &mut Vec<Option<bool>>) -> bool {
    let mut trail = Vec::new();
    let Some(branch) = propagate(clauses, assign, &mut trail) else {
        undo(assign, &mut trail, 0);
        return false;
    };
    if branch == 0 {
        return true;
    }
    for lit in [branch, -branch] {
        let mark = trail.len();
        set(assign, lit, &mut trail);
        if search(clauses, assign) {
            return true;
        }
        undo(assign, &mut trail, mark);
    }
    undo(assign, &mut trail, 0);
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(i: usize) -> Prop {
        Prop::Atom(i)
    }

    #[test]
    fn liar_is_unsat() {
        assert!(!satisfiable(&[Prop::iff(a(0), Prop::not(a(0)))]));
        assert!(satisfiable(&[Prop::iff(a(0), Prop::not(a(1)))]));
        assert!(entails(&[a(0), Prop::implies(a(0), a(1))], &a(1)));
    }

    fn prop(atoms: usize) -> impl Strategy<Value = Prop> {
        let leaf = (0..atoms).prop_map(Prop::Atom);
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Prop::not),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| Prop::implies(x, y)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| Prop::iff(x, y)),
                prop::collection::vec(inner.clone(), 0..3).prop_map(Prop::And),
                prop::collection::vec(inner, 0..3).prop_map(Prop::Or),
            ]
        })
    }

    proptest! {
        #[test]
        fn dpll_agrees_with_truth_table(ps in prop::collection::vec(prop(6), 1..5)) {
            let table = truth_table_model(&ps).unwrap();
            let dpll = dpll_model(&ps);
            prop_assert_eq!(table.is_some(), dpll.is_some());
            if let Some(m) = dpll {
                let mut m = m;
                m.resize(atom_count(&ps), false);
                prop_assert!(ps.iter().all(|p| p.eval(&m)));
            }
        }
    }
}
