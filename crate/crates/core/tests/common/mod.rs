//! Shared generators for the property tests.
#![allow(dead_code)]

pub mod codes;
pub mod taut;

use goedel_core::{Formula, Nat, Term};
use proptest::prelude::*;

pub fn term(max_var: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![(0..=max_var).prop_map(Term::Var), Just(Term::Zero)];
    leaf.prop_recursive(3, 12, 2, move |inner| {
        prop_oneof![
            6 => (1u64..5, inner.clone()).prop_map(|(k, t)| Term::succ_n(Nat::from(k), t)),
            // long enough for the printer's power form
            1 => (65u64..90, inner.clone()).prop_map(|(k, t)| Term::succ_n(Nat::from(k), t)),
            4 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::sub(a, b)),
            3 => inner.prop_map(Term::diag),
        ]
    })
}

/// Formulas of depth at most 6.
pub fn formula(max_var: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        (term(max_var), term(max_var)).prop_map(|(a, b)| Formula::eq(a, b)),
        term(max_var).prop_map(Formula::dem),
    ];
    leaf.prop_recursive(5, 24, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (0..=max_var, inner).prop_map(|(v, f)| Formula::forall(v, f)),
        ]
    })
}
