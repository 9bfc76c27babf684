//! A workbench for Gödel-style self-reference.
//!
//! Layers, bottom-up: exact naturals ([`nat`]), object syntax ([`formula`]),
//! arithmetization ([`codec`]), a Hilbert-style checker ([`kernel`]), the
//! diagonal construction ([`diag`]), the assumption auditor ([`audit`]) and
//! modal decision procedures used as an independent oracle ([`modal`]).

// `Formula::not`, `Term::sub` and friends are AST constructors.
#![allow(clippy::should_implement_trait)]

pub mod audit;
pub mod codec;
pub mod cursor;
pub mod diag;
pub mod formula;
pub mod kernel;
pub mod modal;
pub mod nat;
pub mod primes;
pub mod sat;

pub use audit::{audit, parse_script, AuditReport, DerivationScript};
pub use codec::{decode_formula, encode_formula, CodecError, GoedelNumber};
pub use cursor::{ParseError, ParseErrorKind};
pub use diag::{diagonalize, goedel_sentence, DiagonalCertificate};
pub use formula::{parse_formula, parse_term, print_formula, print_term, Formula, SubstError, Term};
pub use kernel::{check_proof, ProofObject};
pub use modal::{find_model, is_valid, parse_modal, KripkeModel, Logic, ModalFormula};
pub use nat::{Nat, NatError, Run};
