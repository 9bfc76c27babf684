//! Line-based proof files.
//!
//! ```text
//! # comments and blank lines are ignored
//! premise H : Dem(0)
//! 1. Dem(0) ; premise H
//! 2. (Dem(0) -> (0 = 0 -> Dem(0))) ; ax P1 {A: Dem(0)} {B: 0 = 0}
//! 3. (0 = 0 -> Dem(0)) ; mp 1 2
//! ```

use std::fmt::Write;

use thiserror::Error;

use super::{AxiomInstance, Justification, ProofObject, ProofStep};
use crate::formula::{parse_formula, parse_term, Formula, Term};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ProofParseError {
    pub line: usize,
    pub message: String,
}

fn var_name(text: &str) -> Option<u32> {
    match parse_term(text).ok()? {
        Term::Var(v) => Some(v),
        _ => None,
    }
}

/// `{KEY: value}` groups in order.
fn braces(mut text: &str) -> Result<Vec<(&str, &str)>, String> {
    let mut out = Vec::new();
    loop {
        text = text.trim_start();
        if text.is_empty() {
            return Ok(out);
        }
        let body = text
            .strip_prefix('{')
            .ok_or_else(|| format!("expected '{{' at {text:?}"))?;
        let end = body.find('}').ok_or("unclosed '{'")?;
        let (key, value) = body[..end].split_once(':').ok_or("expected KEY: value")?;
        out.push((key.trim(), value.trim()));
        text = &body[end + 1..];
    }
}

fn axiom(schema: &str, args: &str) -> Result<AxiomInstance, String> {
    let groups = braces(args)?;
    let get = |key: &str| -> Result<&str, String> {
        groups
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| format!("{schema} needs {{{key}: ...}}"))
    };
    let formula =
        |key: &str| -> Result<Formula, String> { parse_formula(get(key)?).map_err(|e| format!("{key}: {e}")) };
    Ok(match schema {
        "P1" => AxiomInstance::P1 {
            a: formula("A")?,
            b: formula("B")?,
        },
        "P2" => AxiomInstance::P2 {
            a: formula("A")?,
            b: formula("B")?,
            c: formula("C")?,
        },
        "P3" => AxiomInstance::P3 {
            a: formula("A")?,
            b: formula("B")?,
        },
        "INST" => AxiomInstance::Inst {
            var: var_name(get("x")?).ok_or("x: expected a variable")?,
            body: formula("A")?,
            term: parse_term(get("t")?).map_err(|e| format!("t: {e}"))?,
        },
        other => return Err(format!("unknown schema {other}")),
    })
}

fn index(word: Option<&str>) -> Result<usize, String> {
    word.and_then(|w| w.parse().ok())
        .ok_or_else(|| "expected a step number".to_string())
}

fn justification(text: &str) -> Result<Justification, String> {
    let text = text.trim();
    let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let mut words = rest.split_whitespace();
    let j = match head {
        "ax" => {
            let rest = rest.trim_start();
            let (schema, args) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            return Ok(Justification::Axiom(axiom(schema, args)?));
        }
        "mp" => Justification::ModusPonens {
            minor: index(words.next())?,
            major: index(words.next())?,
        },
        "gen" => Justification::Generalize {
            step: index(words.next())?,
            var: words.next().and_then(var_name).ok_or("expected a variable")?,
        },
        "eval" => Justification::EvalFact,
        "premise" => Justification::Premise(words.next().ok_or("expected a label")?.to_string()),
        other => return Err(format!("unknown justification {other:?}")),
    };
    if words.next().is_some() {
        return Err("unexpected trailing words".into());
    }
    Ok(j)
}

pub fn parse_proof(text: &str) -> Result<ProofObject, ProofParseError> {
    let mut proof = ProofObject::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let err = |message: String| ProofParseError { line, message };
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        if let Some(rest) = content.strip_prefix("premise ") {
            if !proof.steps.is_empty() {
                return Err(err("premises must precede the steps".into()));
            }
            let (label, f) = rest
                .split_once(':')
                .ok_or_else(|| err("expected LABEL : formula".into()))?;
            let f = parse_formula(f).map_err(|e| err(e.to_string()))?;
            if proof.premises.insert(label.trim().to_string(), f).is_some() {
                return Err(err(format!("duplicate premise {}", label.trim())));
            }
            continue;
        }
        let (number, rest) = content
            .split_once('.')
            .ok_or_else(|| err("expected `k. formula ; justification`".into()))?;
        let expected = proof.steps.len() + 1;
        if number.trim().parse::<usize>().ok() != Some(expected) {
            return Err(err(format!("expected step number {expected}")));
        }
        let (f, j) = rest
            .split_once(';')
            .ok_or_else(|| err("missing ';' before justification".into()))?;
        let formula = parse_formula(f).map_err(|e| err(e.to_string()))?;
        let justification = justification(j).map_err(err)?;
        proof.steps.push(ProofStep { formula, justification });
    }
    Ok(proof)
}

pub fn print_proof(p: &ProofObject) -> String {
    let mut out = String::new();
    for (label, f) in &p.premises {
        let _ = writeln!(out, "premise {label} : {f}");
    }
    for (i, step) in p.steps.iter().enumerate() {
        let j = match &step.justification {
            Justification::Axiom(inst) => match inst {
                AxiomInstance::P1 { a, b } => format!("ax P1 {{A: {a}}} {{B: {b}}}"),
                AxiomInstance::P2 { a, b, c } => format!("ax P2 {{A: {a}}} {{B: {b}}} {{C: {c}}}"),
                AxiomInstance::P3 { a, b } => format!("ax P3 {{A: {a}}} {{B: {b}}}"),
                AxiomInstance::Inst { var, body, term } => {
                    format!("ax INST {{x: x{var}}} {{A: {body}}} {{t: {term}}}")
                }
            },
            Justification::ModusPonens { minor, major } => format!("mp {minor} {major}"),
            Justification::Generalize { step, var } => format!("gen {step} x{var}"),
            Justification::EvalFact => "eval".into(),
            Justification::Premise(label) => format!("premise {label}"),
        };
        let _ = writeln!(out, "{}. {} ; {j}", i + 1, step.formula);
    }
    out
}
