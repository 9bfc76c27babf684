mod common;

use common::{formula, term};
use goedel_core::{parse_formula, parse_term, print_formula, print_term, Formula};
use proptest::prelude::*;

fn parse(s: &str) -> Formula {
    parse_formula(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn print_parse_round_trip(f in formula(3)) {
        prop_assert!(f.depth() <= 6);
        let text = print_formula(&f);
        prop_assert_eq!(parse_formula(&text).unwrap(), f);
    }

    #[test]
    fn term_round_trip(t in term(3)) {
        prop_assert_eq!(parse_term(&print_term(&t)).unwrap(), t);
    }

    #[test]
    fn substituting_an_absent_variable_is_identity(f in formula(2), n in 0u64..1000) {
        let t = goedel_core::Term::numeral(n);
        for var in 0..6 {
            if !f.free_vars().contains(&var) {
                prop_assert_eq!(f.substitute(var, &t).unwrap(), f.clone());
            }
        }
    }

    #[test]
    fn substitution_closes_the_variable(f in formula(1), n in 0u64..50) {
        let g = f.substitute(0, &goedel_core::Term::numeral(n)).unwrap();
        prop_assert!(!g.free_vars().contains(&0));
    }

    #[test]
    fn abbreviations_match_their_expansions(a in formula(2), b in formula(2)) {
        let (a, b) = (print_formula(&a), print_formula(&b));
        prop_assert_eq!(
            parse(&format!("({a}) <-> ({b})")),
            parse(&format!("(({a}) -> ({b})) & (({b}) -> ({a}))"))
        );
        prop_assert_eq!(
            parse(&format!("({a}) & ({b})")),
            parse(&format!("~(({a}) -> ~({b}))"))
        );
        prop_assert_eq!(
            parse(&format!("({a}) | ({b})")),
            parse(&format!("~({a}) -> ({b})"))
        );
        prop_assert_eq!(
            parse(&format!("exists x1. ({a})")),
            parse(&format!("~forall x1. ~({a})"))
        );
    }
}

#[test]
fn open_terms_are_not_substitutable() {
    let f = parse("x0 = 0");
    assert!(f.substitute(0, &goedel_core::Term::Var(1)).is_err());
}
