//! Brute-force reference for the codec: raw exponent vectors read as
//! Polish token strings.

use std::collections::BTreeSet;

use goedel_core::{Formula, Term};
use num_bigint::BigUint;

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Independent Polish-notation reader over raw token codes. Returns the
/// formula and its free variables, or `None` if the codes do not spell
/// exactly one formula.
pub fn read(codes: &[u64]) -> Option<(Formula, BTreeSet<u32>)> {
    struct R<'a> {
        codes: &'a [u64],
        pos: usize,
        bound: Vec<u32>,
        free: BTreeSet<u32>,
    }
    impl R<'_> {
        fn next(&mut self) -> Option<u64> {
            let c = *self.codes.get(self.pos)?;
            self.pos += 1;
            Some(c)
        }
        fn var(&mut self) -> Option<u32> {
            let c = self.next()?;
            (c >= 13).then(|| (c - 13) as u32)
        }
        fn term(&mut self) -> Option<Term> {
            match self.next()? {
                6 => Some(Term::sub(self.term()?, self.term()?)),
                7 => Some(Term::diag(self.term()?)),
                8 => Some(Term::Zero),
                9 => Some(Term::succ(self.term()?)),
                c if c >= 13 => {
                    let v = (c - 13) as u32;
                    if !self.bound.contains(&v) {
                        self.free.insert(v);
                    }
                    Some(Term::Var(v))
                }
                _ => None,
            }
        }
        fn formula(&mut self) -> Option<Formula> {
            match self.next()? {
                1 => Some(Formula::not(self.formula()?)),
                2 => Some(Formula::implies(self.formula()?, self.formula()?)),
                3 => {
                    let v = self.var()?;
                    self.bound.push(v);
                    let body = self.formula();
                    self.bound.pop();
                    Some(Formula::forall(v, body?))
                }
                4 => Some(Formula::eq(self.term()?, self.term()?)),
                5 => Some(Formula::dem(self.term()?)),
                _ => None,
            }
        }
    }
    let mut r = R {
        codes,
        pos: 0,
        bound: Vec::new(),
        free: BTreeSet::new(),
    };
    let f = r.formula()?;
    (r.pos == codes.len()).then_some((f, r.free))
}

/// Visits every gapless exponent vector with product at most `bound`
/// (codes 10 to 12 are unassigned and skipped).
pub fn vectors(bound: u128, mut visit: impl FnMut(u128, &[u64])) {
    fn go(bound: u128, product: u128, codes: &mut Vec<u64>, visit: &mut dyn FnMut(u128, &[u64])) {
        if !codes.is_empty() {
            visit(product, codes);
        }
        let Some(&p) = PRIMES.get(codes.len()) else {
            return;
        };
        let mut value = product;
        for e in 1u64.. {
            value = match value.checked_mul(p as u128) {
                Some(v) if v <= bound => v,
                _ => break,
            };
            if (10..=12).contains(&e) {
                continue;
            }
            codes.push(e);
            go(bound, value, codes, visit);
            codes.pop();
        }
    }
    go(bound, 1, &mut Vec::new(), &mut visit);
}

/// Every unary formula with code at most `bound`, ascending.
pub fn oracle(bound: u128) -> Vec<(BigUint, Formula)> {
    let mut out = Vec::new();
    vectors(bound, |product, codes| {
        if let Some((f, free)) = read(codes) {
            if free.len() == 1 && free.contains(&0) {
                out.push((BigUint::from(product), f));
            }
        }
    });
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}
