//! Hilbert-style proof checking.
//!
//! The trusted rules are the three propositional schemas, universal
//! instantiation at a closed term, modus ponens, generalization, premises
//! and evaluation facts. Axiom instances carry their instantiation
//! explicitly, so checking is rebuilding the instance and comparing.

mod text;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::codec::{diag_num, sub_num, CodecError, GoedelNumber};
use crate::formula::{Formula, Term};
use crate::nat::Nat;

pub use text::{parse_proof, print_proof, ProofParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemaId {
    P1,
    P2,
    P3,
    Inst,
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemaId::P1 => "P1",
            SchemaId::P2 => "P2",
            SchemaId::P3 => "P3",
            SchemaId::Inst => "INST",
        })
    }
}

/// A schema together with the values of its metavariables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomInstance {
    /// `A → (B → A)`
    P1 { a: Formula, b: Formula },
    /// `(A → (B → C)) → ((A → B) → (A → C))`
    P2 { a: Formula, b: Formula, c: Formula },
    /// `(¬A → ¬B) → (B → A)`
    P3 { a: Formula, b: Formula },
    /// `∀x A → A[x:=t]`, `t` closed
    Inst { var: u32, body: Formula, term: Term },
}

impl AxiomInstance {
    pub fn schema(&self) -> SchemaId {
        match self {
            AxiomInstance::P1 { .. } => SchemaId::P1,
            AxiomInstance::P2 { .. } => SchemaId::P2,
            AxiomInstance::P3 { .. } => SchemaId::P3,
            AxiomInstance::Inst { .. } => SchemaId::Inst,
        }
    }

    /// The instance formula; fails only for an open instantiation term.
    pub fn formula(&self) -> Result<Formula, Invalid> {
        use Formula as F;
        Ok(match self {
            AxiomInstance::P1 { a, b } => F::implies(a.clone(), F::implies(b.clone(), a.clone())),
            AxiomInstance::P2 { a, b, c } => F::implies(
                F::implies(a.clone(), F::implies(b.clone(), c.clone())),
                F::implies(F::implies(a.clone(), b.clone()), F::implies(a.clone(), c.clone())),
            ),
            AxiomInstance::P3 { a, b } => F::implies(
                F::implies(F::not(a.clone()), F::not(b.clone())),
                F::implies(b.clone(), a.clone()),
            ),
            AxiomInstance::Inst { var, body, term } => {
                let inst = body
                    .substitute(*var, term)
                    .map_err(|_| Invalid::OpenInstantiationTerm)?;
                F::implies(F::forall(*var, body.clone()), inst)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom(AxiomInstance),
    /// Step `minor` proves `A`, step `major` proves `A → B`.
    ModusPonens {
        minor: usize,
        major: usize,
    },
    Generalize {
        step: usize,
        var: u32,
    },
    EvalFact,
    Premise(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    pub formula: Formula,
    pub justification: Justification,
}

/// Steps are numbered from 1. Premises are declared by label.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProofObject {
    pub premises: BTreeMap<String, Formula>,
    pub steps: Vec<ProofStep>,
}

impl ProofObject {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn premise(mut self, label: &str, f: Formula) -> Self {
        self.premises.insert(label.to_string(), f);
        self
    }

    pub fn step(mut self, formula: Formula, justification: Justification) -> Self {
        self.steps.push(ProofStep { formula, justification });
        self
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    /// Coded as the sequence of its step formulas.
    pub fn code(&self) -> GoedelNumber {
        crate::codec::encode_proof(self.steps.iter().map(|s| &s.formula))
    }
}

/// Why a step fails. `code()` is the stable machine-readable name.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Invalid {
    #[error("empty proof")]
    Empty,
    #[error("forward reference")]
    ForwardReference,
    #[error("formula is not the stated {0} instance")]
    SchemaMismatch(SchemaId),
    #[error("instantiation term is not closed")]
    OpenInstantiationTerm,
    #[error("modus ponens premises do not match")]
    ModusPonensMismatch,
    #[error("generalization does not match")]
    GeneralizeMismatch,
    #[error("variable x{0} is free in a premise")]
    GeneralizeOverPremise(u32),
    #[error("not an evaluation fact")]
    NotEvaluable,
    #[error("evaluation fact is false")]
    EvalFalse,
    #[error("evaluation failed: {0}")]
    Eval(EvalError),
    #[error("unknown premise {0}")]
    UnknownPremise(String),
    #[error("formula differs from premise {0}")]
    PremiseMismatch(String),
}

impl Invalid {
    pub fn code(&self) -> &'static str {
        match self {
            Invalid::Empty => "empty",
            Invalid::ForwardReference => "forward-reference",
            Invalid::SchemaMismatch(_) => "schema-mismatch",
            Invalid::OpenInstantiationTerm => "open-instantiation-term",
            Invalid::ModusPonensMismatch => "mp-mismatch",
            Invalid::GeneralizeMismatch => "gen-mismatch",
            Invalid::GeneralizeOverPremise(_) => "gen-over-premise",
            Invalid::NotEvaluable => "not-evaluable",
            Invalid::EvalFalse => "eval-false",
            Invalid::Eval(_) => "eval-error",
            Invalid::UnknownPremise(_) => "unknown-premise",
            Invalid::PremiseMismatch(_) => "premise-mismatch",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// `step` is 1-based (0 for an empty proof).
    Invalid {
        step: usize,
        reason: Invalid,
    },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("term is not closed (x{0})")]
    NotClosed(u32),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// Value of a closed term; `sub` and `diag` mean [`sub_num`] and
/// [`diag_num`].
pub fn eval_term(t: &Term) -> Result<Nat, EvalError> {
    match t {
        Term::Var(v) => Err(EvalError::NotClosed(*v)),
        Term::Zero => Ok(Nat::zero()),
        Term::Succ(k, inner) => {
            let v = eval_term(inner)?;
            k.checked_add(&v).ok_or_else(|| {
                EvalError::Codec(CodecError::ResourceBound(
                    "successor of a number too large to materialize".into(),
                ))
            })
        }
        Term::Sub(a, b) => {
            let n = eval_term(a)?;
            let m = eval_term(b)?;
            Ok(sub_num(&n, &m)?.into_nat())
        }
        Term::Diag(a) => {
            let g = GoedelNumber::new(eval_term(a)?)?;
            Ok(diag_num(&g)?.into_nat())
        }
    }
}

fn eval_fact(f: &Formula) -> Result<(), Invalid> {
    let (a, b, positive) = match f {
        Formula::Eq(a, b) => (a, b, true),
        Formula::Not(g) => match g.as_ref() {
            Formula::Eq(a, b) => (a, b, false),
            _ => return Err(Invalid::NotEvaluable),
        },
        _ => return Err(Invalid::NotEvaluable),
    };
    let x = eval_term(a).map_err(Invalid::Eval)?;
    let y = eval_term(b).map_err(Invalid::Eval)?;
    if (x == y) == positive {
        Ok(())
    } else {
        Err(Invalid::EvalFalse)
    }
}

fn cited(current: usize, i: usize) -> Result<usize, Invalid> {
    if i == 0 || i >= current {
        Err(Invalid::ForwardReference)
    } else {
        Ok(i - 1)
    }
}

fn check_step(p: &ProofObject, index: usize) -> Result<(), Invalid> {
    let number = index + 1;
    let step = &p.steps[index];
    let f = &step.formula;
    match &step.justification {
        Justification::Axiom(inst) => {
            if &inst.formula()? == f {
                Ok(())
            } else {
                Err(Invalid::SchemaMismatch(inst.schema()))
            }
        }
        Justification::ModusPonens { minor, major } => {
            let a = &p.steps[cited(number, *minor)?].formula;
            let ab = &p.steps[cited(number, *major)?].formula;
            match ab {
                Formula::Implies(x, y) if x.as_ref() == a && y.as_ref() == f => Ok(()),
                _ => Err(Invalid::ModusPonensMismatch),
            }
        }
        Justification::Generalize { step: i, var } => {
            let a = &p.steps[cited(number, *i)?].formula;
            if p.premises.values().any(|h| h.free_vars().contains(var)) {
                return Err(Invalid::GeneralizeOverPremise(*var));
            }
            match f {
                Formula::ForAll(v, body) if v == var && body.as_ref() == a => Ok(()),
                _ => Err(Invalid::GeneralizeMismatch),
            }
        }
        Justification::EvalFact => eval_fact(f),
        Justification::Premise(label) => match p.premises.get(label) {
            None => Err(Invalid::UnknownPremise(label.clone())),
            Some(h) if h == f => Ok(()),
            Some(_) => Err(Invalid::PremiseMismatch(label.clone())),
        },
    }
}

/// First failing step, or valid. A valid proof with no premises proves its
/// last formula.
pub fn check_proof(p: &ProofObject) -> Verdict {
    if p.steps.is_empty() {
        return Verdict::Invalid {
            step: 0,
            reason: Invalid::Empty,
        };
    }
    for index in 0..p.steps.len() {
        if let Err(reason) = check_step(p, index) {
            return Verdict::Invalid {
                step: index + 1,
                reason,
            };
        }
    }
    Verdict::Valid
}

/// The five-step derivation of `A → A` from P1 and P2.
pub fn identity_proof(a: &Formula) -> ProofObject {
    use Formula as F;
    let aa = F::implies(a.clone(), a.clone());
    let p2 = AxiomInstance::P2 {
        a: a.clone(),
        b: aa.clone(),
        c: a.clone(),
    };
    let p1_long = AxiomInstance::P1 {
        a: a.clone(),
        b: aa.clone(),
    };
    let p1_short = AxiomInstance::P1 {
        a: a.clone(),
        b: a.clone(),
    };
    let s1 = p2.formula().expect("propositional");
    let s2 = p1_long.formula().expect("propositional");
    let s3 = F::implies(F::implies(a.clone(), aa.clone()), aa.clone());
    let s4 = p1_short.formula().expect("propositional");
    ProofObject::new()
        .step(s1, Justification::Axiom(p2))
        .step(s2, Justification::Axiom(p1_long))
        .step(s3, Justification::ModusPonens { minor: 2, major: 1 })
        .step(s4, Justification::Axiom(p1_short))
        .step(aa, Justification::ModusPonens { minor: 4, major: 3 })
}
