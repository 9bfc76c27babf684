//! Object-language syntax: terms, formulas, substitution.
//!
//! The canonical AST only has `¬`, `→`, `∀`, `=` and `Dem`. Conjunction,
//! disjunction, the biconditional and `∃` exist as constructors and in the
//! concrete syntax, but they expand into the canonical connectives, so every
//! formula has exactly one tree (and one Gödel number).
//!
//! Iterated successors are stored as a single `Succ(k, t)` node with `t` not
//! itself a successor. This keeps numerals for astronomically large values
//! (for instance a formula's own code) representable.

mod parse;
mod print;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::nat::Nat;

pub use parse::{parse_formula, parse_term};
pub use print::{print_formula, print_term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(u32),
    Zero,
    /// `S^k(t)` with `k ≥ 1`; build with [`Term::succ_n`] to keep `t` non-successor.
    Succ(Nat, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Diag(Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll(u32, Box<Formula>),
    Eq(Term, Term),
    Dem(Term),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstError {
    #[error("substituted term must be closed, found free variable x{0}")]
    OpenTerm(u32),
}

impl Term {
    pub fn var(index: u32) -> Term {
        Term::Var(index)
    }

    pub fn numeral(n: impl Into<Nat>) -> Term {
        Term::succ_n(n.into(), Term::Zero)
    }

    pub fn succ(t: Term) -> Term {
        Term::succ_n(Nat::one(), t)
    }

    /// `S^k(t)`, merged into an existing successor run where possible.
    pub fn succ_n(k: Nat, t: Term) -> Term {
        if k.is_zero() {
            return t;
        }
        match t {
            Term::Succ(j, inner) => match k.checked_add(&j) {
                Some(total) => Term::Succ(total, inner),
                // both counts are factored; nesting is the only option left
                None => Term::Succ(k, Box::new(Term::Succ(j, inner))),
            },
            other => Term::Succ(k, Box::new(other)),
        }
    }

    pub fn sub(a: Term, b: Term) -> Term {
        Term::Sub(Box::new(a), Box::new(b))
    }

    pub fn diag(t: Term) -> Term {
        Term::Diag(Box::new(t))
    }

    /// The value `n` if this term is the numeral `S^n(0)`.
    pub fn as_numeral(&self) -> Option<Nat> {
        match self {
            Term::Zero => Some(Nat::zero()),
            Term::Succ(k, inner) if **inner == Term::Zero => Some(k.clone()),
            _ => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.first_var().is_none()
    }

    fn first_var(&self) -> Option<u32> {
        match self {
            Term::Var(i) => Some(*i),
            Term::Zero => None,
            Term::Succ(_, t) | Term::Diag(t) => t.first_var(),
            Term::Sub(a, b) => a.first_var().or_else(|| b.first_var()),
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>, bound: &[u32]) {
        match self {
            Term::Var(i) => {
                if !bound.contains(i) {
                    out.insert(*i);
                }
            }
            Term::Zero => {}
            Term::Succ(_, t) | Term::Diag(t) => t.collect_vars(out, bound),
            Term::Sub(a, b) => {
                a.collect_vars(out, bound);
                b.collect_vars(out, bound);
            }
        }
    }

    fn replace_var(&self, var: u32, t: &Term) -> Term {
        match self {
            Term::Var(i) if *i == var => t.clone(),
            Term::Var(_) | Term::Zero => self.clone(),
            Term::Succ(k, inner) => Term::succ_n(k.clone(), inner.replace_var(var, t)),
            Term::Sub(a, b) => Term::sub(a.replace_var(var, t), b.replace_var(var, t)),
            Term::Diag(a) => Term::diag(a.replace_var(var, t)),
        }
    }
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(var: u32, f: Formula) -> Formula {
        Formula::ForAll(var, Box::new(f))
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn dem(t: Term) -> Formula {
        Formula::Dem(t)
    }

    /// `¬(a → ¬b)`
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::implies(a, Formula::not(b)))
    }

    /// `¬a → b`
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::implies(Formula::not(a), b)
    }

    /// `(a → b) ∧ (b → a)`
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    /// `¬∀x ¬f`
    pub fn exists(var: u32, f: Formula) -> Formula {
        Formula::not(Formula::forall(var, Formula::not(f)))
    }

    pub fn free_vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut out, &mut bound);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<u32>, bound: &mut Vec<u32>) {
        match self {
            Formula::Not(f) => f.collect_free(out, bound),
            Formula::Implies(a, b) => {
                a.collect_free(out, bound);
                b.collect_free(out, bound);
            }
            Formula::ForAll(v, f) => {
                bound.push(*v);
                f.collect_free(out, bound);
                bound.pop();
            }
            Formula::Eq(a, b) => {
                a.collect_vars(out, bound);
                b.collect_vars(out, bound);
            }
            Formula::Dem(t) => t.collect_vars(out, bound),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Replaces every free occurrence of `x{var}` by the closed term `t`.
    pub fn substitute(&self, var: u32, t: &Term) -> Result<Formula, SubstError> {
        if let Some(v) = t.first_var() {
            return Err(SubstError::OpenTerm(v));
        }
        Ok(self.replace_free(var, t))
    }

    /// Substitution without the closedness check; callers guarantee that no
    /// variable of `t` can be captured.
    pub(crate) fn replace_free(&self, var: u32, t: &Term) -> Formula {
        match self {
            Formula::Not(f) => Formula::not(f.replace_free(var, t)),
            Formula::Implies(a, b) => Formula::implies(a.replace_free(var, t), b.replace_free(var, t)),
            Formula::ForAll(v, _) if *v == var => self.clone(),
            Formula::ForAll(v, f) => Formula::forall(*v, f.replace_free(var, t)),
            Formula::Eq(a, b) => Formula::eq(a.replace_var(var, t), b.replace_var(var, t)),
            Formula::Dem(a) => Formula::dem(a.replace_var(var, t)),
        }
    }

    /// Number of connective and atom nodes, used to bound generators.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Not(f) | Formula::ForAll(_, f) => 1 + f.depth(),
            Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Eq(..) | Formula::Dem(_) => 1,
        }
    }
}
