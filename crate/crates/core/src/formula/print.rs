use std::fmt::{self, Write};

use super::{Formula, Term};

/// Successor runs longer than this print as `S^k(t)`.
const NESTED_SUCC_LIMIT: u64 = 64;

/// Canonical concrete syntax; `parse_formula(print_formula(f)) == f`.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, false).expect("writing to a String cannot fail");
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t).expect("writing to a String cannot fail");
    out
}

// `guarded` is set in the antecedent of an implication, where an unbracketed
// quantifier body would swallow the `->`.
fn write_formula(out: &mut String, f: &Formula, guarded: bool) -> fmt::Result {
    match f {
        Formula::Not(g) => {
            out.push('~');
            write_formula(out, g, guarded)
        }
        Formula::Implies(a, b) => {
            out.push('(');
            write_formula(out, a, true)?;
            out.push_str(" -> ");
            write_formula(out, b, false)?;
            out.push(')');
            Ok(())
        }
        Formula::ForAll(v, body) => {
            if guarded {
                out.push('(');
            }
            write!(out, "forall x{v}. ")?;
            write_formula(out, body, false)?;
            if guarded {
                out.push(')');
            }
            Ok(())
        }
        Formula::Eq(a, b) => {
            write_term(out, a)?;
            out.push_str(" = ");
            write_term(out, b)
        }
        Formula::Dem(t) => {
            out.push_str("Dem(");
            write_term(out, t)?;
            out.push(')');
            Ok(())
        }
    }
}

fn write_term(out: &mut String, t: &Term) -> fmt::Result {
    match t {
        Term::Var(i) => write!(out, "x{i}"),
        Term::Zero => {
            out.push('0');
            Ok(())
        }
        Term::Succ(k, inner) => match k.to_u64() {
            Some(n) if n <= NESTED_SUCC_LIMIT => {
                for _ in 0..n {
                    out.push_str("S(");
                }
                write_term(out, inner)?;
                for _ in 0..n {
                    out.push(')');
                }
                Ok(())
            }
            _ => {
                write!(out, "S^{k}(")?;
                write_term(out, inner)?;
                out.push(')');
                Ok(())
            }
        },
        Term::Sub(a, b) => {
            out.push_str("sub(");
            write_term(out, a)?;
            out.push(',');
            write_term(out, b)?;
            out.push(')');
            Ok(())
        }
        Term::Diag(a) => {
            out.push_str("diag(");
            write_term(out, a)?;
            out.push(')');
            Ok(())
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}
