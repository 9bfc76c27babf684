//! The diagonal construction at the level of indices.
//!
//! For a template `Φ(x0)` the diagonalized formula is
//! `ψ = Φ[x0 := sub(x0,x0)]`; with `q` its index the sentence is `ψ(q̄)`.
//! Because the sentence keeps the unevaluated term `sub(q̄,q̄)`, its
//! self-reference is checked by evaluation: that term evaluates to the
//! sentence's own code.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::codec::{encode_formula, index_of, sub_num, CodecError, GoedelNumber, UnaryIndex};
use crate::formula::{Formula, Term};
use crate::kernel::{eval_term, EvalError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalCertificate {
    pub template: Formula,
    pub psi: Formula,
    pub q: UnaryIndex,
    pub sentence: Formula,
    pub sentence_code: GoedelNumber,
    pub fixed_point_checked: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagError {
    #[error("not unary: free variables {0:?}")]
    NotUnary(Vec<u32>),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("fixed point failed: substitute-then-encode and sub_num disagree at index {0}")]
    FixedPointMismatch(u64),
}

fn check_unary(f: &Formula) -> Result<(), DiagError> {
    let free: Vec<u32> = f.free_vars().into_iter().collect();
    if free == [0] {
        Ok(())
    } else {
        Err(DiagError::NotUnary(free))
    }
}

/// `¬Dem(sub(x0,x0))`: `n` is in E when the n-th formula at `n` is not
/// demonstrable.
pub fn e_membership_formula() -> Formula {
    Formula::not(Formula::dem(Term::sub(Term::Var(0), Term::Var(0))))
}

/// Certificate for `psi` at its own index.
pub fn diagonalize(psi: &Formula) -> Result<DiagonalCertificate, DiagError> {
    certify(psi.clone(), psi.clone())
}

/// Certificate for `Φ[x0 := sub(x0,x0)]`.
pub fn diagonalize_template(template: &Formula) -> Result<DiagonalCertificate, DiagError> {
    check_unary(template)?;
    let psi = template.replace_free(0, &Term::sub(Term::Var(0), Term::Var(0)));
    certify(template.clone(), psi)
}

fn certify(template: Formula, psi: Formula) -> Result<DiagonalCertificate, DiagError> {
    check_unary(&psi)?;
    let q = index_of(&psi)?;
    let numeral = Term::numeral(q.0);
    let sentence = psi.substitute(0, &numeral).expect("numerals are closed");
    // symbolic route
    let sentence_code = encode_formula(&sentence);
    // numeric route
    let q_nat = q.0.into();
    let numeric = sub_num(&q_nat, &q_nat)?;
    let fixed_point_checked = sentence_code == numeric;
    Ok(DiagonalCertificate {
        template,
        psi,
        q,
        sentence,
        sentence_code,
        fixed_point_checked,
    })
}

/// The certificate for E; fails loudly when the two routes disagree.
pub fn goedel_sentence() -> Result<DiagonalCertificate, DiagError> {
    let cert = diagonalize(&e_membership_formula())?;
    if !cert.fixed_point_checked {
        return Err(DiagError::FixedPointMismatch(cert.q.0));
    }
    Ok(cert)
}

/// Index of the E-membership formula.
pub fn e_index() -> u64 {
    static Q: OnceLock<u64> = OnceLock::new();
    *Q.get_or_init(|| {
        index_of(&e_membership_formula())
            .expect("the E-membership formula is unary with a small code")
            .0
    })
}

/// The argument of `Dem` when the sentence has the shape `¬Dem(t)` or `Dem(t)`.
pub fn dem_argument(sentence: &Formula) -> Option<&Term> {
    match sentence {
        Formula::Dem(t) => Some(t),
        Formula::Not(g) => match g.as_ref() {
            Formula::Dem(t) => Some(t),
            _ => None,
        },
        _ => None,
    }
}

/// Whether the sentence's `Dem` argument evaluates to its own code.
pub fn self_reference_holds(cert: &DiagonalCertificate) -> Result<bool, DiagError> {
    match dem_argument(&cert.sentence) {
        Some(t) => Ok(&eval_term(t)? == cert.sentence_code.value()),
        None => Ok(false),
    }
}

#[derive(Serialize)]
struct CertificateJson {
    template: String,
    psi: String,
    q: u64,
    sentence: String,
    sentence_code_hex: String,
    fixed_point_checked: bool,
}

impl Serialize for DiagonalCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CertificateJson {
            template: self.template.to_string(),
            psi: self.psi.to_string(),
            q: self.q.0,
            sentence: self.sentence.to_string(),
            sentence_code_hex: self.sentence_code.to_len_hex(),
            fixed_point_checked: self.fixed_point_checked,
        }
        .serialize(s)
    }
}
