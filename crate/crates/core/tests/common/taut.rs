//! Truth-table oracle: `¬` and `→` are connectives, every other
//! subformula is an atom. Closed equations are atoms with a fixed value
//! computed by substitute-then-encode; the rest range over all
//! assignments.

use std::collections::HashMap;

use goedel_core::codec::{encode_formula, formula_at, UnaryIndex};
use goedel_core::{Formula, Nat, Term};

/// Value of a closed term, `sub` via the symbolic route. `None` for
/// anything the oracle does not handle, including `sub` with an index or
/// argument past the first thousand.
fn value(t: &Term) -> Option<Nat> {
    match t {
        Term::Var(_) => None,
        Term::Zero => Some(Nat::zero()),
        Term::Succ(k, inner) => k.checked_add(&value(inner)?),
        Term::Sub(a, b) => {
            let n = value(a)?.to_u64().filter(|&n| n < 1000)?;
            let psi = formula_at(UnaryIndex(n)).ok()?;
            let m = value(b)?.to_u64().filter(|&m| m < 1000)?;
            let inst = psi.substitute(0, &Term::numeral(m)).ok()?;
            Some(encode_formula(&inst).into_nat())
        }
        Term::Diag(_) => None,
    }
}

#[derive(Default)]
struct Atoms {
    fixed: HashMap<Formula, bool>,
    free: Vec<Formula>,
}

impl Atoms {
    fn collect(&mut self, f: &Formula) {
        match f {
            Formula::Not(a) => self.collect(a),
            Formula::Implies(a, b) => {
                self.collect(a);
                self.collect(b);
            }
            Formula::Eq(a, b) => match (value(a), value(b)) {
                (Some(x), Some(y)) => {
                    self.fixed.insert(f.clone(), x == y);
                }
                _ => self.add_free(f),
            },
            _ => self.add_free(f),
        }
    }

    fn add_free(&mut self, f: &Formula) {
        if !self.free.contains(f) {
            self.free.push(f.clone());
        }
    }
}

fn truth(f: &Formula, atoms: &Atoms, bits: u64) -> bool {
    match f {
        Formula::Not(a) => !truth(a, atoms, bits),
        Formula::Implies(a, b) => !truth(a, atoms, bits) || truth(b, atoms, bits),
        _ => match atoms.fixed.get(f) {
            Some(&v) => v,
            None => {
                let i = atoms.free.iter().position(|g| g == f).expect("collected");
                bits >> i & 1 == 1
            }
        },
    }
}

/// True under every assignment to the free atoms.
pub fn tautology(f: &Formula) -> bool {
    let mut atoms = Atoms::default();
    atoms.collect(f);
    assert!(atoms.free.len() <= 16, "too many atoms for the oracle");
    (0..1u64 << atoms.free.len()).all(|bits| truth(f, &atoms, bits))
}
