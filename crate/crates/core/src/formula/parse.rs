use super::{Formula, Term};
use crate::cursor::{Cursor, ParseError, ParseErrorKind};
use crate::nat::Nat;

/// Parses the concrete object syntax into the canonical AST.
///
/// `->` is right-associative and binds weaker than `|`, which binds weaker
/// than `&`; `<->` is weakest. Quantifier bodies extend as far right as
/// possible.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut c = Cursor::new(text);
    let f = formula(&mut c)?;
    if !c.at_end() {
        return Err(c.error(ParseErrorKind::TrailingInput));
    }
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut c = Cursor::new(text);
    let t = term(&mut c)?;
    if !c.at_end() {
        return Err(c.error(ParseErrorKind::TrailingInput));
    }
    Ok(t)
}

pub(crate) fn formula(c: &mut Cursor) -> Result<Formula, ParseError> {
    let lhs = implication(c)?;
    if c.eat("<->") {
        let rhs = formula(c)?;
        return Ok(Formula::iff(lhs, rhs));
    }
    Ok(lhs)
}

fn implication(c: &mut Cursor) -> Result<Formula, ParseError> {
    let lhs = disjunction(c)?;
    if c.eat("->") {
        let rhs = implication(c)?;
        return Ok(Formula::implies(lhs, rhs));
    }
    Ok(lhs)
}

fn disjunction(c: &mut Cursor) -> Result<Formula, ParseError> {
    let mut lhs = conjunction(c)?;
    while c.eat("|") {
        let rhs = conjunction(c)?;
        lhs = Formula::or(lhs, rhs);
    }
    Ok(lhs)
}

fn conjunction(c: &mut Cursor) -> Result<Formula, ParseError> {
    let mut lhs = unary(c)?;
    while c.eat("&") {
        let rhs = unary(c)?;
        lhs = Formula::and(lhs, rhs);
    }
    Ok(lhs)
}

fn unary(c: &mut Cursor) -> Result<Formula, ParseError> {
    if c.eat("~") {
        return Ok(Formula::not(unary(c)?));
    }
    if c.eat("(") {
        let f = formula(c)?;
        c.expect(")")?;
        return Ok(f);
    }
    match c.peek_ident() {
        Some("forall") | Some("exists") => {
            let exists = c.ident() == Some("exists");
            let v = variable(c)?;
            c.expect(".")?;
            let body = formula(c)?;
            Ok(if exists {
                Formula::exists(v, body)
            } else {
                Formula::forall(v, body)
            })
        }
        Some("Dem") => {
            c.ident();
            c.expect("(")?;
            let t = term(c)?;
            c.expect(")")?;
            Ok(Formula::dem(t))
        }
        _ => {
            let lhs = term(c)?;
            c.expect("=")?;
            let rhs = term(c)?;
            Ok(Formula::eq(lhs, rhs))
        }
    }
}

fn variable(c: &mut Cursor) -> Result<u32, ParseError> {
    let start = {
        c.skip_ws();
        c.pos()
    };
    match c.ident() {
        Some(id) => var_index(id).ok_or_else(|| c.error_at(start, ParseErrorKind::UnknownIdentifier(id.to_string()))),
        None => Err(c.error(ParseErrorKind::Expected("variable"))),
    }
}

fn var_index(id: &str) -> Option<u32> {
    let digits = id.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    // reject leading zeros so printing is the only spelling
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

pub(crate) fn term(c: &mut Cursor) -> Result<Term, ParseError> {
    c.skip_ws();
    let start = c.pos();
    if let Some(d) = c.digits() {
        return if d == "0" {
            Ok(Term::Zero)
        } else {
            Err(c.error_at(start, ParseErrorKind::BadNumber(d.to_string())))
        };
    }
    let id = c.ident().ok_or_else(|| c.error(ParseErrorKind::Expected("term")))?;
    match id {
        "S" => {
            let count = if c.eat("^") {
                let at = c.pos();
                let lit = c
                    .nat_literal()
                    .ok_or_else(|| c.error(ParseErrorKind::Expected("successor count")))?;
                lit.parse::<Nat>()
                    .map_err(|_| c.error_at(at, ParseErrorKind::BadNumber(lit.to_string())))?
            } else {
                Nat::one()
            };
            c.expect("(")?;
            let t = term(c)?;
            c.expect(")")?;
            Ok(Term::succ_n(count, t))
        }
        "sub" => {
            c.expect("(")?;
            let a = term(c)?;
            c.expect(",")?;
            let b = term(c)?;
            c.expect(")")?;
            Ok(Term::sub(a, b))
        }
        "diag" => {
            c.expect("(")?;
            let a = term(c)?;
            c.expect(")")?;
            Ok(Term::diag(a))
        }
        other => var_index(other)
            .map(Term::Var)
            .ok_or_else(|| c.error_at(start, ParseErrorKind::UnknownIdentifier(other.to_string()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Term {
        Term::Var(i)
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse_formula("~Dem(sub(x0,x0))").unwrap(),
            Formula::not(Formula::dem(Term::sub(x(0), x(0))))
        );
        assert_eq!(
            parse_formula("forall x0. x0 = x0").unwrap(),
            Formula::forall(0, Formula::eq(x(0), x(0)))
        );
    }

    #[test]
    fn conjunction_abbreviation() {
        let a = parse_formula("Dem(x0)").unwrap();
        let b = parse_formula("0 = x1").unwrap();
        assert_eq!(
            parse_formula("Dem(x0) & 0 = x1").unwrap(),
            Formula::not(Formula::implies(a, Formula::not(b)))
        );
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_formula("Dem(x0) -> Dem(x1) -> Dem(x2)").unwrap();
        let g = parse_formula("Dem(x0) -> (Dem(x1) -> Dem(x2))").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(
            parse_formula("  ~ Dem ( sub ( x0 , x0 ) ) ").unwrap(),
            parse_formula("~Dem(sub(x0,x0))").unwrap()
        );
    }

    #[test]
    fn successor_power_literal() {
        assert_eq!(parse_term("S^3(0)").unwrap(), Term::numeral(3u64));
        assert_eq!(parse_term("S(S^2(x1))").unwrap(), Term::succ_n(Nat::from(3u64), x(1)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("Dem(y0)").unwrap_err();
        assert_eq!(e.position, 4);
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("y0".into()));

        let e = parse_formula("~Dem(x0").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Expected(")"));
        assert_eq!(e.position, 7);

        let e = parse_formula("Dem(x0) Dem(x0)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::TrailingInput);

        assert!(parse_formula("Dem(3)").is_err());
        assert!(parse_formula("forall x01. Dem(x01)").is_err());
    }
}
