//! Propositional modal logic as an independent semantic oracle.
//!
//! `[]` plays the role of the provability predicate in schematic form. The
//! direct evaluator over finite Kripke models is the trusted base; the
//! tableau ([`is_valid`]) and the bounded model search ([`find_model`]) are
//! both checked against it.

mod search;
mod tableau;
mod verdicts;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cursor::{Cursor, ParseError, ParseErrorKind};

pub use search::{find_model, ModelSearch, MAX_SEARCH_WORLDS};
pub use tableau::{is_valid, Validity, TABLEAU_NODE_LIMIT};
pub use verdicts::{corpus, schema_verdicts, Question, SchemaRow, Verdict};

/// Most atoms a formula may use.
pub const MAX_ATOMS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModalFormula {
    Const(bool),
    Atom(u32),
    Not(Box<ModalFormula>),
    Implies(Box<ModalFormula>, Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    Iff(Box<ModalFormula>, Box<ModalFormula>),
    Box(Box<ModalFormula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Logic {
    K,
    K4,
    GL,
}

impl Logic {
    pub const ALL: [Logic; 3] = [Logic::K, Logic::K4, Logic::GL];

    pub fn transitive(self) -> bool {
        self != Logic::K
    }

    pub fn irreflexive(self) -> bool {
        self == Logic::GL
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::K => "K",
            Logic::K4 => "K4",
            Logic::GL => "GL",
        })
    }
}

impl FromStr for Logic {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "K" => Ok(Logic::K),
            "K4" => Ok(Logic::K4),
            "GL" => Ok(Logic::GL),
            _ => Err(format!("unknown logic {s:?} (expected K, K4 or GL)")),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModalError {
    #[error("formula uses {0} atoms; at most {MAX_ATOMS} are supported")]
    TooManyAtoms(usize),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("model search supports at most {MAX_SEARCH_WORLDS} worlds")]
    WorldBound,
    #[error("internal check failed: {0}")]
    Unsound(String),
}

impl ModalFormula {
    pub fn atom(i: u32) -> Self {
        ModalFormula::Atom(i)
    }

    pub fn not(f: Self) -> Self {
        ModalFormula::Not(Box::new(f))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        ModalFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn and(a: Self, b: Self) -> Self {
        ModalFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        ModalFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Self, b: Self) -> Self {
        ModalFormula::Iff(Box::new(a), Box::new(b))
    }

    pub fn boxed(f: Self) -> Self {
        ModalFormula::Box(Box::new(f))
    }

    /// Rewrites `∧`, `∨`, `↔` and `⊤` into `¬`, `→`, `⊥`.
    pub fn normalize(&self) -> ModalFormula {
        use ModalFormula as M;
        match self {
            M::Const(true) => M::not(M::Const(false)),
            M::Const(false) | M::Atom(_) => self.clone(),
            M::Not(a) => M::not(a.normalize()),
            M::Implies(a, b) => M::implies(a.normalize(), b.normalize()),
            M::And(a, b) => M::not(M::implies(a.normalize(), M::not(b.normalize()))),
            M::Or(a, b) => M::implies(M::not(a.normalize()), b.normalize()),
            M::Iff(a, b) => {
                let (a, b) = (a.normalize(), b.normalize());
                M::not(M::implies(M::implies(a.clone(), b.clone()), M::not(M::implies(b, a))))
            }
            M::Box(a) => M::boxed(a.normalize()),
        }
    }

    pub fn atoms(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<u32>) {
        match self {
            ModalFormula::Const(_) => {}
            ModalFormula::Atom(i) => {
                out.insert(*i);
            }
            ModalFormula::Not(a) | ModalFormula::Box(a) => a.collect_atoms(out),
            ModalFormula::Implies(a, b)
            | ModalFormula::And(a, b)
            | ModalFormula::Or(a, b)
            | ModalFormula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// One more than the largest atom index.
    pub fn atom_bound(&self) -> usize {
        self.atoms().last().map_or(0, |&i| i as usize + 1)
    }

    pub(crate) fn check_atoms(&self) -> Result<(), ModalError> {
        let n = self.atoms().len();
        if n > MAX_ATOMS {
            Err(ModalError::TooManyAtoms(n))
        } else {
            Ok(())
        }
    }
}

/// Finite Kripke model tagged with the logic whose frame conditions it is
/// meant to satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeModel {
    pub logic: Logic,
    pub worlds: usize,
    /// `(from, to)` pairs, sorted.
    pub relation: Vec<(usize, usize)>,
    /// Atoms true at each world.
    pub valuation: Vec<Vec<u32>>,
}

impl KripkeModel {
    pub fn accessible(&self, w: usize, v: usize) -> bool {
        self.relation.binary_search(&(w, v)).is_ok()
    }

    pub fn successors(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        self.relation.iter().filter(move |(a, _)| *a == w).map(|(_, b)| *b)
    }

    /// Direct recursive evaluation.
    pub fn eval(&self, w: usize, f: &ModalFormula) -> bool {
        use ModalFormula as M;
        match f {
            M::Const(b) => *b,
            M::Atom(i) => self.valuation[w].contains(i),
            M::Not(a) => !self.eval(w, a),
            M::Implies(a, b) => !self.eval(w, a) || self.eval(w, b),
            M::And(a, b) => self.eval(w, a) && self.eval(w, b),
            M::Or(a, b) => self.eval(w, a) || self.eval(w, b),
            M::Iff(a, b) => self.eval(w, a) == self.eval(w, b),
            M::Box(a) => self.successors(w).all(|v| self.eval(v, a)),
        }
    }

    pub fn is_transitive(&self) -> bool {
        self.relation
            .iter()
            .all(|&(a, b)| self.successors(b).all(|c| self.accessible(a, c)))
    }

    pub fn is_irreflexive(&self) -> bool {
        self.relation.iter().all(|(a, b)| a != b)
    }

    /// Checks the tag's frame conditions and the shape of the data.
    pub fn frame_ok(&self) -> bool {
        let shape = self.valuation.len() == self.worlds
            && self.relation.iter().all(|&(a, b)| a < self.worlds && b < self.worlds)
            && self.relation.windows(2).all(|w| w[0] < w[1]);
        shape
            && (!self.logic.transitive() || self.is_transitive())
            && (!self.logic.irreflexive() || self.is_irreflexive())
    }

    pub(crate) fn transitive_closure(&mut self) {
        let n = self.worlds;
        let mut r = vec![vec![false; n]; n];
        for &(a, b) in &self.relation {
            r[a][b] = true;
        }
        #[allow(clippy::needless_range_loop)]
        for k in 0..n {
            for i in 0..n {
                if r[i][k] {
                    for j in 0..n {
                        if r[k][j] {
                            r[i][j] = true;
                        }
                    }
                }
            }
        }
        self.relation = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| r[i][j])
            .collect();
    }
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} model, {} world(s)", self.logic, self.worlds)?;
        for w in 0..self.worlds {
            let succ: Vec<String> = self.successors(w).map(|v| format!("w{v}")).collect();
            let atoms: Vec<String> = self.valuation[w].iter().map(|p| format!("p{p}")).collect();
            writeln!(f, "  w{w}: true {{{}}}, sees {{{}}}", atoms.join(", "), succ.join(", "))?;
        }
        Ok(())
    }
}

// ---- syntax ----

fn write_modal(out: &mut fmt::Formatter<'_>, m: &ModalFormula, top: bool) -> fmt::Result {
    use ModalFormula as M;
    let binary = |out: &mut fmt::Formatter<'_>, a: &M, op: &str, b: &M| -> fmt::Result {
        if !top {
            out.write_str("(")?;
        }
        write_modal(out, a, false)?;
        write!(out, " {op} ")?;
        write_modal(out, b, false)?;
        if !top {
            out.write_str(")")?;
        }
        Ok(())
    };
    match m {
        M::Const(true) => out.write_str("true"),
        M::Const(false) => out.write_str("false"),
        M::Atom(i) => write!(out, "p{i}"),
        M::Not(a) => {
            out.write_str("~")?;
            write_modal(out, a, false)
        }
        M::Box(a) => {
            out.write_str("[]")?;
            write_modal(out, a, false)
        }
        M::Implies(a, b) => binary(out, a, "->", b),
        M::And(a, b) => binary(out, a, "&", b),
        M::Or(a, b) => binary(out, a, "|", b),
        M::Iff(a, b) => binary(out, a, "<->", b),
    }
}

impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_modal(f, self, true)
    }
}

/// `<->` and `->` right-associative and weakest, then `|`, then `&`, then
/// the prefixes `~` and `[]`.
pub fn parse_modal(text: &str) -> Result<ModalFormula, ParseError> {
    let mut c = Cursor::new(text);
    let f = iff(&mut c)?;
    if !c.at_end() {
        return Err(c.error(ParseErrorKind::TrailingInput));
    }
    Ok(f)
}

impl FromStr for ModalFormula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_modal(s)
    }
}

fn iff(c: &mut Cursor) -> Result<ModalFormula, ParseError> {
    let lhs = implication(c)?;
    if c.eat("<->") {
        return Ok(ModalFormula::iff(lhs, iff(c)?));
    }
    Ok(lhs)
}

fn implication(c: &mut Cursor) -> Result<ModalFormula, ParseError> {
    let lhs = disjunction(c)?;
    if c.eat("->") {
        return Ok(ModalFormula::implies(lhs, implication(c)?));
    }
    Ok(lhs)
}

fn disjunction(c: &mut Cursor) -> Result<ModalFormula, ParseError> {
    let mut lhs = conjunction(c)?;
    while c.eat("|") {
        lhs = ModalFormula::or(lhs, conjunction(c)?);
    }
    Ok(lhs)
}

fn conjunction(c: &mut Cursor) -> Result<ModalFormula, ParseError> {
    let mut lhs = prefix(c)?;
    while c.eat("&") {
        lhs = ModalFormula::and(lhs, prefix(c)?);
    }
    Ok(lhs)
}

fn prefix(c: &mut Cursor) -> Result<ModalFormula, ParseError> {
    if c.eat("~") {
        return Ok(ModalFormula::not(prefix(c)?));
    }
    if c.eat("[]") {
        return Ok(ModalFormula::boxed(prefix(c)?));
    }
    if c.eat("(") {
        let f = iff(c)?;
        c.expect(")")?;
        return Ok(f);
    }
    c.skip_ws();
    let at = c.pos();
    match c.ident() {
        Some("true") => Ok(ModalFormula::Const(true)),
        Some("false") => Ok(ModalFormula::Const(false)),
        Some(id) => {
            let digits = id.strip_prefix('p').filter(|d| {
                !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) && (d.len() == 1 || !d.starts_with('0'))
            });
            digits
                .and_then(|d| d.parse().ok())
                .map(ModalFormula::Atom)
                .ok_or_else(|| c.error_at(at, ParseErrorKind::UnknownIdentifier(id.to_string())))
        }
        None => Err(c.error(ParseErrorKind::Expected("modal formula"))),
    }
}
