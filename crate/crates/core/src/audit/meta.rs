//! Meta-level statements about designated propositions.
//!
//! A designator names an object-level proposition: `App(i,j)` is the i-th
//! unary formula at argument j, `InE(j)` is E-membership of j, `~d` is the
//! negation of d and `$D` is a schematic designator in assumption schemas.
//! `d` alone asserts the designated proposition, `Dem[d]` asserts its
//! demonstrability.

use std::collections::BTreeSet;
use std::fmt;

use crate::cursor::{Cursor, ParseError, ParseErrorKind};
use crate::diag::e_index;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexTerm {
    Var(String),
    Const(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Designator {
    App(IndexTerm, IndexTerm),
    InE(IndexTerm),
    Neg(Box<Designator>),
    Schematic(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetaFormula {
    Assert(Designator),
    DemOf(Designator),
    Not(Box<MetaFormula>),
    Implies(Box<MetaFormula>, Box<MetaFormula>),
    Iff(Box<MetaFormula>, Box<MetaFormula>),
    ForAll(String, Box<MetaFormula>),
}

impl IndexTerm {
    pub fn q() -> IndexTerm {
        IndexTerm::Const(e_index())
    }

    fn instantiate(&self, var: &str, c: u64) -> IndexTerm {
        match self {
            IndexTerm::Var(v) if v == var => IndexTerm::Const(c),
            other => other.clone(),
        }
    }
}

impl Designator {
    pub fn app(i: IndexTerm, j: IndexTerm) -> Designator {
        Designator::App(i, j)
    }

    /// Negation with double negations cancelled.
    pub fn negate(self) -> Designator {
        match self {
            Designator::Neg(d) => *d,
            d => Designator::Neg(Box::new(d)),
        }
    }

    pub fn normalize(&self) -> Designator {
        match self {
            Designator::Neg(d) => d.normalize().negate(),
            d => d.clone(),
        }
    }

    pub fn is_ground(&self) -> bool {
        let ground = |t: &IndexTerm| matches!(t, IndexTerm::Const(_));
        match self {
            Designator::App(i, j) => ground(i) && ground(j),
            Designator::InE(j) => ground(j),
            Designator::Neg(d) => d.is_ground(),
            Designator::Schematic(_) => false,
        }
    }

    /// Strips negations; returns the base and whether their count is odd.
    pub fn polarity(&self) -> (&Designator, bool) {
        match self {
            Designator::Neg(d) => {
                let (base, odd) = d.polarity();
                (base, !odd)
            }
            d => (d, false),
        }
    }

    fn collect_vars(&self, bound: &[String], out: &mut Vec<String>) {
        let mut add = |t: &IndexTerm| {
            if let IndexTerm::Var(v) = t {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            }
        };
        match self {
            Designator::App(i, j) => {
                add(i);
                add(j);
            }
            Designator::InE(j) => add(j),
            Designator::Neg(d) => d.collect_vars(bound, out),
            Designator::Schematic(_) => {}
        }
    }

    fn map_terms(&self, f: &dyn Fn(&IndexTerm) -> IndexTerm) -> Designator {
        match self {
            Designator::App(i, j) => Designator::App(f(i), f(j)),
            Designator::InE(j) => Designator::InE(f(j)),
            Designator::Neg(d) => Designator::Neg(Box::new(d.map_terms(f))),
            Designator::Schematic(s) => Designator::Schematic(s.clone()),
        }
    }

    fn map(&self, f: &dyn Fn(&Designator) -> Option<Designator>) -> Designator {
        if let Some(d) = f(self) {
            return d;
        }
        match self {
            Designator::Neg(d) => Designator::Neg(Box::new(d.map(f))),
            d => d.clone(),
        }
    }

    /// E-membership is the q-th formula's instance: `InE(t)` ↦ `App(q,t)`.
    pub fn rewrite_e(&self, q: u64) -> Designator {
        self.map(&|d| match d {
            Designator::InE(t) => Some(Designator::App(IndexTerm::Const(q), t.clone())),
            _ => None,
        })
    }

    pub fn rewrite_e_back(&self, q: u64) -> Designator {
        self.map(&|d| match d {
            Designator::App(IndexTerm::Const(c), t) if *c == q => Some(Designator::InE(t.clone())),
            _ => None,
        })
    }

    /// Whether this is (a negation of) an E-membership statement.
    pub fn is_e_membership(&self, q: u64) -> bool {
        match self.polarity().0 {
            Designator::InE(_) => true,
            Designator::App(IndexTerm::Const(c), _) => *c == q,
            _ => false,
        }
    }

    fn schematic_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Designator::Neg(d) => d.schematic_names(out),
            Designator::Schematic(s) => {
                out.insert(s.clone());
            }
            _ => {}
        }
    }
}

impl MetaFormula {
    pub fn not(f: MetaFormula) -> MetaFormula {
        MetaFormula::Not(Box::new(f))
    }

    pub fn implies(a: MetaFormula, b: MetaFormula) -> MetaFormula {
        MetaFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: MetaFormula, b: MetaFormula) -> MetaFormula {
        MetaFormula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, f: MetaFormula) -> MetaFormula {
        MetaFormula::ForAll(v.to_string(), Box::new(f))
    }

    /// Classical identifications: `¬A(d) ≡ A(¬d)`, `¬¬φ ≡ φ`, `¬¬d ≡ d`.
    pub fn normalize(&self) -> MetaFormula {
        match self {
            MetaFormula::Assert(d) => MetaFormula::Assert(d.normalize()),
            MetaFormula::DemOf(d) => MetaFormula::DemOf(d.normalize()),
            MetaFormula::Not(f) => match f.normalize() {
                MetaFormula::Assert(d) => MetaFormula::Assert(d.negate()),
                MetaFormula::Not(g) => *g,
                g => MetaFormula::not(g),
            },
            MetaFormula::Implies(a, b) => MetaFormula::implies(a.normalize(), b.normalize()),
            MetaFormula::Iff(a, b) => MetaFormula::iff(a.normalize(), b.normalize()),
            MetaFormula::ForAll(v, f) => MetaFormula::forall(v, f.normalize()),
        }
    }

    /// Normal-form negation.
    pub fn negated(&self) -> MetaFormula {
        MetaFormula::not(self.clone()).normalize()
    }

    pub fn equivalent(&self, other: &MetaFormula) -> bool {
        self.normalize() == other.normalize()
    }

    /// Leading universal variables and the matrix.
    pub fn split_prefix(&self) -> (Vec<String>, &MetaFormula) {
        let mut vars = Vec::new();
        let mut f = self;
        while let MetaFormula::ForAll(v, body) = f {
            vars.push(v.clone());
            f = body;
        }
        (vars, f)
    }

    pub fn with_prefix(vars: &[String], matrix: MetaFormula) -> MetaFormula {
        vars.iter().rev().fold(matrix, |f, v| MetaFormula::forall(v, f))
    }

    /// Free index variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_vars(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            MetaFormula::Assert(d) | MetaFormula::DemOf(d) => d.collect_vars(bound, out),
            MetaFormula::Not(f) => f.collect_vars(bound, out),
            MetaFormula::Implies(a, b) | MetaFormula::Iff(a, b) => {
                a.collect_vars(bound, out);
                b.collect_vars(bound, out);
            }
            MetaFormula::ForAll(v, f) => {
                bound.push(v.clone());
                f.collect_vars(bound, out);
                bound.pop();
            }
        }
    }

    /// No quantifiers, no variables and no schematic designators.
    pub fn is_ground(&self) -> bool {
        match self {
            MetaFormula::Assert(d) | MetaFormula::DemOf(d) => d.is_ground(),
            MetaFormula::Not(f) => f.is_ground(),
            MetaFormula::Implies(a, b) | MetaFormula::Iff(a, b) => a.is_ground() && b.is_ground(),
            MetaFormula::ForAll(..) => false,
        }
    }

    pub fn map_designators(&self, f: &dyn Fn(&Designator) -> Designator) -> MetaFormula {
        match self {
            MetaFormula::Assert(d) => MetaFormula::Assert(f(d)),
            MetaFormula::DemOf(d) => MetaFormula::DemOf(f(d)),
            MetaFormula::Not(g) => MetaFormula::not(g.map_designators(f)),
            MetaFormula::Implies(a, b) => MetaFormula::implies(a.map_designators(f), b.map_designators(f)),
            MetaFormula::Iff(a, b) => MetaFormula::iff(a.map_designators(f), b.map_designators(f)),
            MetaFormula::ForAll(v, g) => MetaFormula::forall(v, g.map_designators(f)),
        }
    }

    /// Replaces free occurrences of the index variable `var` by `c`.
    pub fn instantiate(&self, var: &str, c: u64) -> MetaFormula {
        match self {
            MetaFormula::ForAll(v, _) if v == var => self.clone(),
            MetaFormula::ForAll(v, g) => MetaFormula::forall(v, g.instantiate(var, c)),
            MetaFormula::Assert(d) => MetaFormula::Assert(d.map_terms(&|t| t.instantiate(var, c))),
            MetaFormula::DemOf(d) => MetaFormula::DemOf(d.map_terms(&|t| t.instantiate(var, c))),
            MetaFormula::Not(g) => MetaFormula::not(g.instantiate(var, c)),
            MetaFormula::Implies(a, b) => MetaFormula::implies(a.instantiate(var, c), b.instantiate(var, c)),
            MetaFormula::Iff(a, b) => MetaFormula::iff(a.instantiate(var, c), b.instantiate(var, c)),
        }
    }

    pub fn bind_schematic(&self, name: &str, value: &Designator) -> MetaFormula {
        self.map_designators(&|d| {
            d.map(&|x| match x {
                Designator::Schematic(s) if s == name => Some(value.clone()),
                _ => None,
            })
        })
    }

    pub fn schematic_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.for_each_designator(&mut |d| d.schematic_names(&mut out));
        out
    }

    pub fn for_each_designator(&self, f: &mut dyn FnMut(&Designator)) {
        match self {
            MetaFormula::Assert(d) | MetaFormula::DemOf(d) => f(d),
            MetaFormula::Not(g) | MetaFormula::ForAll(_, g) => g.for_each_designator(f),
            MetaFormula::Implies(a, b) | MetaFormula::Iff(a, b) => {
                a.for_each_designator(f);
                b.for_each_designator(f);
            }
        }
    }
}

// ---- printing ----

impl fmt::Display for IndexTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexTerm::Var(v) => f.write_str(v),
            IndexTerm::Const(c) if *c == e_index() => f.write_str("q"),
            IndexTerm::Const(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for Designator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Designator::App(i, j) => write!(f, "App({i},{j})"),
            Designator::InE(j) => write!(f, "InE({j})"),
            Designator::Neg(d) => write!(f, "~{d}"),
            Designator::Schematic(s) => write!(f, "${s}"),
        }
    }
}

fn write_meta(f: &mut fmt::Formatter<'_>, m: &MetaFormula, top: bool) -> fmt::Result {
    match m {
        MetaFormula::Assert(d) => write!(f, "{d}"),
        MetaFormula::DemOf(d) => write!(f, "Dem[{d}]"),
        MetaFormula::Not(g) => {
            f.write_str("~")?;
            write_meta(f, g, false)
        }
        MetaFormula::Implies(a, b) | MetaFormula::Iff(a, b) => {
            let op = if matches!(m, MetaFormula::Implies(..)) {
                "->"
            } else {
                "<->"
            };
            if !top {
                f.write_str("(")?;
            }
            write_meta(f, a, false)?;
            write!(f, " {op} ")?;
            write_meta(f, b, false)?;
            if !top {
                f.write_str(")")?;
            }
            Ok(())
        }
        MetaFormula::ForAll(v, g) => {
            if !top {
                f.write_str("(")?;
            }
            write!(f, "all {v}. ")?;
            write_meta(f, g, true)?;
            if !top {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for MetaFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_meta(f, self, true)
    }
}

// ---- parsing ----

/// `<->` (right-assoc, weakest), `->` (right-assoc), then `~`, brackets,
/// `all n.`, `Dem[d]` and bare designators.
pub fn parse_meta(text: &str) -> Result<MetaFormula, ParseError> {
    let mut c = Cursor::new(text);
    let f = meta(&mut c)?;
    if !c.at_end() {
        return Err(c.error(ParseErrorKind::TrailingInput));
    }
    Ok(f)
}

pub fn parse_designator(text: &str) -> Result<Designator, ParseError> {
    let mut c = Cursor::new(text);
    let d = designator(&mut c)?;
    if !c.at_end() {
        return Err(c.error(ParseErrorKind::TrailingInput));
    }
    Ok(d)
}

fn meta(c: &mut Cursor) -> Result<MetaFormula, ParseError> {
    let lhs = implication(c)?;
    if c.eat("<->") {
        return Ok(MetaFormula::iff(lhs, meta(c)?));
    }
    Ok(lhs)
}

fn implication(c: &mut Cursor) -> Result<MetaFormula, ParseError> {
    let lhs = unary(c)?;
    if c.eat("->") {
        return Ok(MetaFormula::implies(lhs, implication(c)?));
    }
    Ok(lhs)
}

fn unary(c: &mut Cursor) -> Result<MetaFormula, ParseError> {
    if c.eat("~") {
        return Ok(MetaFormula::not(unary(c)?));
    }
    if c.eat("(") {
        let f = meta(c)?;
        c.expect(")")?;
        return Ok(f);
    }
    match c.peek_ident() {
        Some("all") => {
            c.ident();
            let v = index_var(c)?;
            c.expect(".")?;
            Ok(MetaFormula::forall(&v, meta(c)?))
        }
        Some("Dem") => {
            c.ident();
            c.expect("[")?;
            let d = designator(c)?;
            c.expect("]")?;
            Ok(MetaFormula::DemOf(d))
        }
        _ => Ok(MetaFormula::Assert(designator(c)?)),
    }
}

fn index_var(c: &mut Cursor) -> Result<String, ParseError> {
    c.skip_ws();
    let at = c.pos();
    match c.ident() {
        Some("q") => Err(c.error_at(at, ParseErrorKind::UnknownIdentifier("q".into()))),
        Some(v) if v.starts_with(|ch: char| ch.is_ascii_lowercase()) => Ok(v.to_string()),
        Some(v) => Err(c.error_at(at, ParseErrorKind::UnknownIdentifier(v.to_string()))),
        None => Err(c.error(ParseErrorKind::Expected("index variable"))),
    }
}

fn index_term(c: &mut Cursor) -> Result<IndexTerm, ParseError> {
    c.skip_ws();
    let at = c.pos();
    if let Some(d) = c.digits() {
        return d
            .parse()
            .map(IndexTerm::Const)
            .map_err(|_| c.error_at(at, ParseErrorKind::BadNumber(d.to_string())));
    }
    if c.peek_ident() == Some("q") {
        c.ident();
        return Ok(IndexTerm::q());
    }
    index_var(c).map(IndexTerm::Var)
}

fn designator(c: &mut Cursor) -> Result<Designator, ParseError> {
    if c.eat("~") {
        return Ok(Designator::Neg(Box::new(designator(c)?)));
    }
    if c.eat("$") {
        let id = c
            .ident()
            .ok_or_else(|| c.error(ParseErrorKind::Expected("schematic name")))?;
        return Ok(Designator::Schematic(id.to_string()));
    }
    c.skip_ws();
    let at = c.pos();
    match c.ident() {
        Some("App") => {
            c.expect("(")?;
            let i = index_term(c)?;
            c.expect(",")?;
            let j = index_term(c)?;
            c.expect(")")?;
            Ok(Designator::App(i, j))
        }
        Some("InE") => {
            c.expect("(")?;
            let j = index_term(c)?;
            c.expect(")")?;
            Ok(Designator::InE(j))
        }
        Some(other) => Err(c.error_at(at, ParseErrorKind::UnknownIdentifier(other.to_string()))),
        None => Err(c.error(ParseErrorKind::Expected("designator"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> MetaFormula {
        parse_meta(s).unwrap()
    }

    #[test]
    fn print_parse_round_trip() {
        for s in [
            "all n. InE(n) <-> ~Dem[App(n,n)]",
            "Dem[$D] -> $D",
            "Dem[~App(q,q)] <-> Dem[App(q,q)]",
            "(all n. Dem[InE(n)]) -> Dem[App(0,q)]",
        ] {
            let f = m(s);
            assert_eq!(f.to_string(), s);
            assert_eq!(m(&f.to_string()), f);
        }
    }

    #[test]
    fn negation_push() {
        assert_eq!(m("~InE(n)").normalize(), m("~InE(n)").normalize());
        assert_eq!(
            m("~InE(n)").normalize(),
            MetaFormula::Assert(Designator::Neg(Box::new(Designator::InE(IndexTerm::Var("n".into())))))
        );
        assert_eq!(m("~~Dem[~~InE(n)]").normalize(), m("Dem[InE(n)]"));
        assert!(m("~~~InE(3)").equivalent(&m("~InE(3)")));
    }

    #[test]
    fn q_is_a_constant() {
        assert_eq!(m("InE(q)"), MetaFormula::Assert(Designator::InE(IndexTerm::Const(169))));
        assert!(parse_meta("all q. InE(q)").is_err());
    }

    #[test]
    fn rewrite_e_both_ways() {
        let d = parse_designator("~InE(n)").unwrap();
        let r = d.rewrite_e(169);
        assert_eq!(r.to_string(), "~App(q,n)");
        assert_eq!(r.rewrite_e_back(169), d);
    }
}
