//! Modal renderings of the self-reference schemas and their verdicts.
//!
//! Reading `Dem` as `[]` is an analytical overlay: the object-level
//! predicate is not a modality, so a row says what follows from the
//! schematic shape alone.

use rayon::prelude::*;
use serde::Serialize;

use super::{find_model, is_valid, parse_modal, Logic, ModalError, ModelSearch, Validity, MAX_SEARCH_WORLDS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Question {
    Satisfiable,
    Valid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Satisfiable { worlds: usize },
    Unsatisfiable { up_to: usize },
    Valid,
    NotValid { worlds: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemaRow {
    pub name: &'static str,
    pub formula: &'static str,
    pub logic: Logic,
    pub question: Question,
    pub verdict: Verdict,
}

const SCHEMAS: &[(&str, &str, Question)] = &[
    ("goedel-fixed-point", "p0 <-> ~[]p0", Question::Satisfiable),
    ("provable-iff-unprovable", "[]p0 <-> ~[]p0", Question::Satisfiable),
    ("refutable-iff-provable", "[]~p0 <-> []p0", Question::Satisfiable),
    (
        "refutable-iff-provable-and-provable-iff-unprovable",
        "([]~p0 <-> []p0) & ([]p0 <-> ~[]p0)",
        Question::Satisfiable,
    ),
    (
        "refutable-iff-provable-with-consistency",
        "([]~p0 <-> []p0) & ~[]false",
        Question::Satisfiable,
    ),
    (
        "refutable-iff-provable-with-consistency-and-decided",
        "([]~p0 <-> []p0) & ~[]false & ([]p0 | []~p0)",
        Question::Satisfiable,
    ),
    (
        "provable-fixed-point-consistent-and-provable",
        "(p0 <-> ~[]p0) & [](p0 <-> ~[]p0) & ~[]false & []p0",
        Question::Satisfiable,
    ),
    ("loeb", "[]([]p0 -> p0) -> []p0", Question::Valid),
    ("consistency-unprovable", "~[]false -> ~[]~[]false", Question::Valid),
    ("reflection", "[]p0 -> p0", Question::Valid),
];

/// Formulas used to cross-check the tableau against model search.
pub fn corpus() -> Vec<&'static str> {
    let mut out: Vec<&'static str> = SCHEMAS.iter().map(|(_, f, _)| *f).collect();
    out.extend([
        "p0",
        "~p0",
        "true",
        "false",
        "p0 -> p0",
        "[]true",
        "[]false",
        "~[]false",
        "[](p0 -> p1) -> ([]p0 -> []p1)",
        "[]p0 -> [][]p0",
        "[]p0 & ~p0",
        "~[]p0 -> []~[]p0",
        "p0 -> []~[]~p0",
        "[]p0 -> ~[]~p0",
        "[](p0 & p1) <-> ([]p0 & []p1)",
        "([]p0 | []p1) -> [](p0 | p1)",
        "[](p0 | p1) -> ([]p0 | []p1)",
        "~([]p0 <-> ~[]p0)",
        "[](p0 <-> ~[]p0) -> (p0 <-> ~[]false)",
        "[](p0 <-> ~[]p0) -> ([]p0 -> []false)",
        "[](p0 <-> []p0) -> p0",
        "[]([]p0 -> p0)",
        "~[]p0 & ~[]~p0",
        "[][]p0 -> []p0",
        "[]([]p0 -> p1) | []([]p1 -> p0)",
        "~[]false -> ~[]p0 | ~[]~p0",
        "([]~p0 <-> []p0) -> ([]p0 -> []false)",
        "(p0 <-> ~[]p0) -> ~[]p0 | p0",
        "[]p0 & []~p0",
        "[]([]p0 -> p0) & ~[]p0",
    ]);
    out
}

fn decide(formula: &str, logic: Logic, question: Question) -> Result<Verdict, ModalError> {
    let f = parse_modal(formula).expect("shipped schema parses");
    Ok(match question {
        Question::Satisfiable => match find_model(&f, logic, MAX_SEARCH_WORLDS)? {
            ModelSearch::Model { model } => Verdict::Satisfiable { worlds: model.worlds },
            ModelSearch::NoneUpTo { worlds } => Verdict::Unsatisfiable { up_to: worlds },
        },
        Question::Valid => match is_valid(&f, logic)? {
            Validity::Valid => Verdict::Valid,
            Validity::Countermodel { model } => Verdict::NotValid { worlds: model.worlds },
        },
    })
}

/// Every schema in every logic, in a fixed order.
pub fn schema_verdicts() -> Result<Vec<SchemaRow>, ModalError> {
    let jobs: Vec<_> = SCHEMAS
        .iter()
        .flat_map(|&(name, formula, question)| {
            Logic::ALL
                .into_iter()
                .map(move |logic| (name, formula, question, logic))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(name, formula, question, logic)| {
            Ok(SchemaRow {
                name,
                formula,
                logic,
                question,
                verdict: decide(formula, logic, question)?,
            })
        })
        .collect()
}
