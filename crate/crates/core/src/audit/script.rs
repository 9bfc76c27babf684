//! Derivation scripts and their text form.
//!
//! ```text
//! assume LABEL : <meta-formula>  -- provenance
//! step ID := <rule> <args> [=> <meta-formula>]  -- note
//! ```
//!
//! Rules: `use LABEL [$D=<designator>]...`, `transpose i`, `iff-elim-f i`,
//! `iff-elim-b i`, `syllogism i j`, `iff-intro i j`, `instantiate i n c`,
//! `rewrite-e i`, `rewrite-e-back i`, `neg-push i`, `mp i j`,
//! `suppose <meta-formula>`, `reductio h i j`.

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use thiserror::Error;

use super::meta::{parse_designator, parse_meta, Designator, IndexTerm, MetaFormula};
use crate::diag::e_index;

/// Which designators a schematic assumption may be instantiated with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BindingScope {
    #[default]
    Any,
    /// Only E-membership statements and their negations.
    EMembership,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assumption {
    pub label: String,
    pub schema: MetaFormula,
    pub provenance: String,
    pub scope: BindingScope,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleApp {
    UseAssumption {
        label: String,
        bindings: Vec<(String, Designator)>,
    },
    Transpose(String),
    IffElimF(String),
    IffElimB(String),
    /// `i: A → B`, `j: B → C` gives `A → C`.
    Syllogism(String, String),
    /// `i: B → A`, `j: A → B` gives `A ↔ B`.
    IffIntro(String, String),
    Instantiate {
        step: String,
        var: String,
        value: u64,
    },
    RewriteE(String),
    RewriteEBack(String),
    NegPush(String),
    /// `minor: A`, `major: A → B` gives `B`.
    ModusPonens(String, String),
    Suppose(MetaFormula),
    /// Discharges `hypothesis` given steps proving `φ` and `¬φ`.
    Reductio {
        hypothesis: String,
        positive: String,
        negative: String,
    },
}

impl RuleApp {
    pub fn name(&self) -> &'static str {
        match self {
            RuleApp::UseAssumption { .. } => "use",
            RuleApp::Transpose(_) => "transpose",
            RuleApp::IffElimF(_) => "iff-elim-f",
            RuleApp::IffElimB(_) => "iff-elim-b",
            RuleApp::Syllogism(..) => "syllogism",
            RuleApp::IffIntro(..) => "iff-intro",
            RuleApp::Instantiate { .. } => "instantiate",
            RuleApp::RewriteE(_) => "rewrite-e",
            RuleApp::RewriteEBack(_) => "rewrite-e-back",
            RuleApp::NegPush(_) => "neg-push",
            RuleApp::ModusPonens(..) => "mp",
            RuleApp::Suppose(_) => "suppose",
            RuleApp::Reductio { .. } => "reductio",
        }
    }

    /// Step ids this application cites.
    pub fn cited(&self) -> Vec<&str> {
        match self {
            RuleApp::UseAssumption { .. } | RuleApp::Suppose(_) => vec![],
            RuleApp::Transpose(i)
            | RuleApp::IffElimF(i)
            | RuleApp::IffElimB(i)
            | RuleApp::RewriteE(i)
            | RuleApp::RewriteEBack(i)
            | RuleApp::NegPush(i)
            | RuleApp::Instantiate { step: i, .. } => vec![i],
            RuleApp::Syllogism(i, j) | RuleApp::IffIntro(i, j) | RuleApp::ModusPonens(i, j) => {
                vec![i, j]
            }
            RuleApp::Reductio {
                hypothesis,
                positive,
                negative,
            } => vec![hypothesis, positive, negative],
        }
    }
}

impl fmt::Display for RuleApp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        match self {
            RuleApp::UseAssumption { label, bindings } => {
                write!(f, " {label}")?;
                for (name, d) in bindings {
                    write!(f, " ${name}={d}")?;
                }
                Ok(())
            }
            RuleApp::Instantiate { step, var, value } => {
                write!(f, " {step} {var} {}", IndexTerm::Const(*value))
            }
            RuleApp::Suppose(m) => write!(f, " {m}"),
            other => {
                for id in other.cited() {
                    write!(f, " {id}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptStep {
    pub id: String,
    pub rule: RuleApp,
    /// The formula the script claims; checked modulo normalization.
    pub claim: Option<MetaFormula>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationScript {
    pub name: String,
    pub assumptions: Vec<Assumption>,
    pub steps: Vec<ScriptStep>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScriptError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("duplicate assumption label {0}")]
    DuplicateLabel(String),
    #[error("duplicate step id {0}")]
    DuplicateStep(String),
    #[error("step {step}: unknown assumption {label}")]
    UnknownAssumption { step: String, label: String },
    #[error("step {step}: {cited} is not an earlier step")]
    NotBackward { step: String, cited: String },
}

impl DerivationScript {
    /// Labels unique, assumptions known, references strictly backward.
    pub fn validate(&self) -> Result<(), ScriptError> {
        let mut labels = BTreeSet::new();
        for a in &self.assumptions {
            if !labels.insert(a.label.as_str()) {
                return Err(ScriptError::DuplicateLabel(a.label.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for s in &self.steps {
            for c in s.rule.cited() {
                if !seen.contains(c) {
                    return Err(ScriptError::NotBackward {
                        step: s.id.clone(),
                        cited: c.to_string(),
                    });
                }
            }
            if let RuleApp::UseAssumption { label, .. } = &s.rule {
                if !labels.contains(label.as_str()) {
                    return Err(ScriptError::UnknownAssumption {
                        step: s.id.clone(),
                        label: label.clone(),
                    });
                }
            }
            if !seen.insert(s.id.as_str()) {
                return Err(ScriptError::DuplicateStep(s.id.clone()));
            }
        }
        Ok(())
    }

    pub fn labels(&self) -> Vec<String> {
        self.assumptions.iter().map(|a| a.label.clone()).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.name);
        for a in &self.assumptions {
            let _ = write!(out, "assume {} : {}", a.label, a.schema);
            if !a.provenance.is_empty() {
                let _ = write!(out, "  -- {}", a.provenance);
            }
            out.push('\n');
        }
        for s in &self.steps {
            let _ = write!(out, "step {} := {}", s.id, s.rule);
            if let Some(c) = &s.claim {
                let _ = write!(out, " => {c}");
            }
            if let Some(n) = &s.note {
                let _ = write!(out, "  -- {n}");
            }
            out.push('\n');
        }
        out
    }
}

fn split_note(line: &str) -> (&str, Option<String>) {
    match line.split_once("--") {
        Some((body, note)) => (body.trim(), Some(note.trim().to_string())),
        None => (line.trim(), None),
    }
}

fn index_value(word: &str) -> Option<u64> {
    if word == "q" {
        Some(e_index())
    } else {
        word.parse().ok()
    }
}

fn parse_rule(text: &str) -> Result<RuleApp, String> {
    let text = text.trim();
    let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    if head == "suppose" {
        return parse_meta(rest).map(RuleApp::Suppose).map_err(|e| e.to_string());
    }
    let words: Vec<&str> = rest.split_whitespace().collect();
    let arity = |n: usize| -> Result<(), String> {
        if words.len() == n {
            Ok(())
        } else {
            Err(format!("{head} takes {n} argument(s)"))
        }
    };
    let w = |i: usize| words[i].to_string();
    Ok(match head {
        "use" => {
            let label = words.first().ok_or("use needs an assumption label")?.to_string();
            let mut bindings = Vec::new();
            for b in &words[1..] {
                let (name, d) = b
                    .strip_prefix('$')
                    .and_then(|b| b.split_once('='))
                    .ok_or_else(|| format!("expected $NAME=designator, got {b:?}"))?;
                let d = parse_designator(d).map_err(|e| e.to_string())?;
                bindings.push((name.to_string(), d));
            }
            RuleApp::UseAssumption { label, bindings }
        }
        "transpose" | "iff-elim-f" | "iff-elim-b" | "rewrite-e" | "rewrite-e-back" | "neg-push" => {
            arity(1)?;
            match head {
                "transpose" => RuleApp::Transpose(w(0)),
                "iff-elim-f" => RuleApp::IffElimF(w(0)),
                "iff-elim-b" => RuleApp::IffElimB(w(0)),
                "rewrite-e" => RuleApp::RewriteE(w(0)),
                "rewrite-e-back" => RuleApp::RewriteEBack(w(0)),
                _ => RuleApp::NegPush(w(0)),
            }
        }
        "syllogism" | "iff-intro" | "mp" => {
            arity(2)?;
            match head {
                "syllogism" => RuleApp::Syllogism(w(0), w(1)),
                "iff-intro" => RuleApp::IffIntro(w(0), w(1)),
                _ => RuleApp::ModusPonens(w(0), w(1)),
            }
        }
        "instantiate" => {
            arity(3)?;
            RuleApp::Instantiate {
                step: w(0),
                var: w(1),
                value: index_value(words[2]).ok_or("instantiate needs a constant (q or digits)")?,
            }
        }
        "reductio" => {
            arity(3)?;
            RuleApp::Reductio {
                hypothesis: w(0),
                positive: w(1),
                negative: w(2),
            }
        }
        other => return Err(format!("unknown rule {other:?}")),
    })
}

pub fn parse_script(name: &str, text: &str) -> Result<DerivationScript, ScriptError> {
    let mut script = DerivationScript {
        name: name.to_string(),
        assumptions: Vec::new(),
        steps: Vec::new(),
    };
    for (n, raw) in text.lines().enumerate() {
        let err = |message: String| ScriptError::Syntax { line: n + 1, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (body, note) = split_note(trimmed);
        if let Some(rest) = body.strip_prefix("assume ") {
            let (label, schema) = rest
                .split_once(':')
                .ok_or_else(|| err("expected `assume LABEL : formula`".into()))?;
            let schema = parse_meta(schema).map_err(|e| err(e.to_string()))?;
            script.assumptions.push(Assumption {
                label: label.trim().to_string(),
                schema,
                provenance: note.unwrap_or_default(),
                scope: BindingScope::Any,
            });
        } else if let Some(rest) = body.strip_prefix("step ") {
            let (id, rest) = rest
                .split_once(":=")
                .ok_or_else(|| err("expected `step ID := rule`".into()))?;
            let (rule, claim) = match rest.split_once("=>") {
                Some((r, c)) => (r, Some(parse_meta(c).map_err(|e| err(e.to_string()))?)),
                None => (rest, None),
            };
            script.steps.push(ScriptStep {
                id: id.trim().to_string(),
                rule: parse_rule(rule).map_err(err)?,
                claim,
                note,
            });
        } else {
            return Err(err("expected `assume` or `step`".into()));
        }
    }
    script.validate()?;
    Ok(script)
}

const ASSUMPTIONS: &str = "\
assume DEF_E : all n. InE(n) <-> ~Dem[App(n,n)]  -- definition of the set E
assume NEC_DEF : all n. Dem[App(n,n)] -> Dem[~InE(n)]  -- completing a proof of App(n,n) by the definition of E
assume REFL : Dem[$D] -> $D  -- every provable expression is true
assume COMP_E : all n. ~Dem[App(n,n)] -> Dem[InE(n)]  -- reconstruction: true E-membership is provable
assume CONS : Dem[$D] -> ~Dem[~$D]  -- consistency of the provability predicate
";

const CANONICAL_STEPS: &str = "\
step 1 := use DEF_E => all n. InE(n) <-> ~Dem[App(n,n)]
step 2 := transpose 1 => all n. ~InE(n) <-> Dem[App(n,n)]
step 3 := use NEC_DEF => all n. Dem[App(n,n)] -> Dem[~InE(n)]
step 4 := use REFL $D=~InE(n) => all n. Dem[~InE(n)] -> ~InE(n)
step 5 := iff-elim-f 2 => all n. ~InE(n) -> Dem[App(n,n)]
step 6 := syllogism 4 5 => all n. Dem[~InE(n)] -> Dem[App(n,n)]
step 7 := iff-intro 3 6 => all n. Dem[~InE(n)] <-> Dem[App(n,n)]
step 8 := rewrite-e 7 => all n. Dem[~App(q,n)] <-> Dem[App(n,n)]
step 9a := use REFL $D=InE(n) => all n. Dem[InE(n)] -> InE(n)  -- auxiliary
step 9b := iff-elim-f 1 => all n. InE(n) -> ~Dem[App(n,n)]  -- auxiliary
step 9c := syllogism 9a 9b => all n. Dem[InE(n)] -> ~Dem[App(n,n)]  -- auxiliary
step 9d := use COMP_E => all n. ~Dem[App(n,n)] -> Dem[InE(n)]  -- auxiliary
step 9e := iff-intro 9d 9c => all n. Dem[InE(n)] <-> ~Dem[App(n,n)]  -- auxiliary
step 9 := rewrite-e 9e => all n. Dem[App(q,n)] <-> ~Dem[App(n,n)]  -- reconstruction
step 10 := instantiate 8 n q => Dem[~App(q,q)] <-> Dem[App(q,q)]
step 11 := instantiate 9 n q => Dem[App(q,q)] <-> ~Dem[App(q,q)]
";

const GOEDEL_STEPS: &str = "\
step g1 := use DEF_E => all n. InE(n) <-> ~Dem[App(n,n)]
step g2 := instantiate g1 n q => InE(q) <-> ~Dem[App(q,q)]
step g3 := rewrite-e g2 => App(q,q) <-> ~Dem[App(q,q)]
step g4 := iff-elim-f g3 => App(q,q) -> ~Dem[App(q,q)]
step h1 := suppose Dem[App(q,q)]  -- branch: the sentence is provable
step g5 := use REFL $D=App(q,q) => Dem[App(q,q)] -> App(q,q)
step g6 := mp h1 g5 => App(q,q)
step g7 := mp g6 g4 => ~Dem[App(q,q)]
step c1 := reductio h1 h1 g7 => ~Dem[App(q,q)]
step h2 := suppose Dem[~App(q,q)]  -- branch: its negation is provable
step g8 := use REFL $D=~App(q,q) => Dem[~App(q,q)] -> ~App(q,q)
step g9 := mp h2 g8 => ~App(q,q)
step g10 := transpose g3 => ~App(q,q) <-> Dem[App(q,q)]
step g11 := iff-elim-f g10 => ~App(q,q) -> Dem[App(q,q)]
step g12 := mp g9 g11 => Dem[App(q,q)]
step g13 := use CONS $D=App(q,q) => Dem[App(q,q)] -> ~Dem[~App(q,q)]
step g14 := mp g12 g13 => ~Dem[~App(q,q)]
step c2 := reductio h2 h2 g14 => ~Dem[~App(q,q)]
";

const COMP_E_STEPS: &str = "\
step x1 := use COMP_E => all n. ~Dem[App(n,n)] -> Dem[InE(n)]
step x2 := instantiate x1 n q => ~Dem[App(q,q)] -> Dem[InE(q)]
step x3 := mp c1 x2 => Dem[InE(q)]
step x4 := rewrite-e x3 => Dem[App(q,q)]
";

fn shipped(name: &str, parts: &[&str]) -> DerivationScript {
    parse_script(name, &parts.concat()).expect("shipped scripts parse")
}

/// The derivation of the two paradoxical equivalences, numbered as in the
/// original argument; the `9a`–`9e` steps spell out the reconstructed step 9.
pub fn canonical_script() -> DerivationScript {
    shipped("canonical", &[ASSUMPTIONS, CANONICAL_STEPS])
}

/// The two reductio arguments about the Gödel sentence `App(q,q)`.
pub fn goedel_script() -> DerivationScript {
    shipped("goedel-replay", &[ASSUMPTIONS, GOEDEL_STEPS])
}

/// The reductio replay extended with one use of COMP_E.
pub fn goedel_script_with_comp_e() -> DerivationScript {
    shipped("goedel-replay+comp-e", &[ASSUMPTIONS, GOEDEL_STEPS, COMP_E_STEPS])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for s in [canonical_script(), goedel_script_with_comp_e()] {
            let again = parse_script(&s.name, &s.to_text()).unwrap();
            assert_eq!(again, s);
        }
    }

    #[test]
    fn structural_errors() {
        let text = "assume A : Dem[$D] -> $D\nstep 1 := mp 2 3\n";
        assert!(matches!(parse_script("t", text), Err(ScriptError::NotBackward { .. })));
        let text = "step 1 := use NOPE\n";
        assert!(matches!(
            parse_script("t", text),
            Err(ScriptError::UnknownAssumption { .. })
        ));
        let text = "assume A : InE(0)\nassume A : InE(1)\n";
        assert_eq!(parse_script("t", text), Err(ScriptError::DuplicateLabel("A".into())));
        assert!(matches!(
            parse_script("t", "step 1 := frob 1"),
            Err(ScriptError::Syntax { line: 1, .. })
        ));
    }
}
