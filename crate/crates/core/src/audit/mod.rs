//! Assumption auditing for meta-level derivations.
//!
//! A script names its assumptions and derives steps with a fixed rule set.
//! Checking records, per step, the derived formula and the assumptions and
//! open hypotheses it rests on; it then flags contradictions both by
//! syntactic pattern and by propositional unsatisfiability over ground
//! atoms (`Dem[d]` and the assertion of `d` are unrelated atoms). From
//! this the auditor derives minimal inconsistent assumption sets and a
//! four-way classification of designated propositions.

mod meta;
mod script;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::diag::e_index;
use crate::sat::{self, Prop};

pub use meta::{parse_designator, parse_meta, Designator, IndexTerm, MetaFormula};
pub use script::{
    canonical_script, goedel_script, goedel_script_with_comp_e, parse_script, Assumption, BindingScope,
    DerivationScript, RuleApp, ScriptError, ScriptStep,
};

pub const REPORT_SCHEMA: &str = "audit/1";

/// Largest assumption set the exhaustive core search accepts.
pub const MAX_CORE_LABELS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum StepStatus {
    Valid,
    /// The rule does not apply; `expected` names the required shape.
    Invalid {
        expected: String,
    },
    /// The step rests on an assumption outside the checked subset or on a
    /// step that is not valid.
    Killed {
        because: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOutcome {
    pub id: String,
    pub rule: RuleApp,
    pub formula: Option<MetaFormula>,
    pub status: StepStatus,
    pub assumptions: BTreeSet<String>,
    pub hypotheses: BTreeSet<String>,
    pub note: Option<String>,
}

impl StepOutcome {
    pub fn is_valid(&self) -> bool {
        self.status == StepStatus::Valid
    }

    /// Valid, hypothesis-free and quantifier-free.
    fn is_ground_fact(&self) -> bool {
        self.is_valid() && self.hypotheses.is_empty() && self.formula.as_ref().is_some_and(MetaFormula::is_ground)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pattern {
    /// `φ ↔ ¬φ` in the matrix of the step.
    IffNegation,
    /// `Dem[¬d] ↔ Dem[d]`; contradictory given consistency once `d` is
    /// decided either way.
    DemNegIffDem,
    /// The conjunction of all ground facts up to this step is unsatisfiable.
    CumulativeUnsat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Contradiction {
    pub step: String,
    pub pattern: Pattern,
    /// Assumptions the finding is conditional on; empty when unconditional.
    pub requires: Vec<String>,
    pub assumptions: BTreeSet<String>,
    /// Result of the atom-level check on the step's ground instance (with
    /// the `requires` schemas added for conditional findings).
    pub ground_unsat: bool,
}

impl Contradiction {
    pub fn is_unconditional(&self) -> bool {
        self.requires.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Provable,
    Refutable,
    Independent,
    Overdetermined,
    Unknown,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Provable => "provable",
            Classification::Refutable => "refutable",
            Classification::Independent => "independent",
            Classification::Overdetermined => "overdetermined",
            Classification::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub script: String,
    pub q: u64,
    pub steps: Vec<StepOutcome>,
    pub contradictions: Vec<Contradiction>,
    /// Filled by [`audit`]; `None` after a bare [`check_script`].
    pub minimal_inconsistent_subsets: Option<Vec<Vec<String>>>,
    pub classification: BTreeMap<Designator, Classification>,
}

impl AuditReport {
    pub fn step(&self, id: &str) -> Option<&StepOutcome> {
        self.steps.iter().find(|s| s.id == id)
    }

    pub fn all_valid(&self) -> bool {
        self.steps.iter().all(StepOutcome::is_valid)
    }

    pub fn invalid_steps(&self) -> Vec<&StepOutcome> {
        self.steps
            .iter()
            .filter(|s| matches!(s.status, StepStatus::Invalid { .. }))
            .collect()
    }

    /// Assumptions consumed by some valid step.
    pub fn consumed(&self) -> BTreeSet<String> {
        self.steps
            .iter()
            .filter(|s| s.is_valid())
            .flat_map(|s| s.assumptions.iter().cloned())
            .collect()
    }

    pub fn is_inconsistent(&self) -> bool {
        self.contradictions.iter().any(Contradiction::is_unconditional)
    }

    pub fn flagged_steps(&self) -> BTreeSet<String> {
        self.contradictions.iter().map(|c| c.step.clone()).collect()
    }

    /// Assumptions behind the flagged steps.
    pub fn contradiction_assumptions(&self) -> BTreeSet<String> {
        self.contradictions
            .iter()
            .flat_map(|c| c.assumptions.iter().chain(&c.requires).cloned())
            .collect()
    }

    /// Steps whose id is purely numeric (the numbered derivation, as
    /// opposed to auxiliary steps).
    pub fn numbered_steps(&self) -> Vec<&StepOutcome> {
        self.steps
            .iter()
            .filter(|s| s.id.bytes().all(|b| b.is_ascii_digit()))
            .collect()
    }

    pub fn classify(&self, d: &Designator) -> Classification {
        classify(d, self)
    }
}

// ---- rule checking ----

type Outcome = Result<(MetaFormula, BTreeSet<String>, BTreeSet<String>), StepStatus>;

fn invalid(expected: impl Into<String>) -> StepStatus {
    StepStatus::Invalid {
        expected: expected.into(),
    }
}

struct Checker<'a> {
    script: &'a DerivationScript,
    available: &'a BTreeSet<String>,
    q: u64,
    done: BTreeMap<&'a str, StepOutcome>,
}

impl<'a> Checker<'a> {
    fn cited(&self, id: &str) -> Result<&StepOutcome, StepStatus> {
        let s = &self.done[id];
        if s.is_valid() {
            Ok(s)
        } else {
            Err(StepStatus::Killed {
                because: format!("step {id}"),
            })
        }
    }

    fn formula(&self, id: &str) -> Result<&MetaFormula, StepStatus> {
        Ok(self.cited(id)?.formula.as_ref().expect("valid steps carry a formula"))
    }

    fn two(&self, i: &str, j: &str) -> Result<(Vec<String>, MetaFormula, MetaFormula), StepStatus> {
        let (vi, mi) = self.formula(i)?.split_prefix();
        let (vj, mj) = self.formula(j)?.split_prefix();
        if vi != vj {
            return Err(invalid("both premises under the same universal prefix"));
        }
        Ok((vi, mi.clone(), mj.clone()))
    }

    fn deps(&self, ids: &[&str]) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut a = BTreeSet::new();
        let mut h = BTreeSet::new();
        for id in ids {
            let s = &self.done[id];
            a.extend(s.assumptions.iter().cloned());
            h.extend(s.hypotheses.iter().cloned());
        }
        (a, h)
    }

    fn derive(&self, step: &ScriptStep) -> Outcome {
        use MetaFormula as M;
        let cited = step.rule.cited();
        for id in &cited {
            self.cited(id)?;
        }
        let (mut assumptions, mut hypotheses) = self.deps(&cited);
        let one = |i: &str| -> Result<(Vec<String>, MetaFormula), StepStatus> {
            let (v, m) = self.formula(i)?.split_prefix();
            Ok((v, m.clone()))
        };
        let formula = match &step.rule {
            RuleApp::UseAssumption { label, bindings } => {
                if !self.available.contains(label) {
                    return Err(StepStatus::Killed {
                        because: format!("assumption {label}"),
                    });
                }
                let a = self
                    .script
                    .assumptions
                    .iter()
                    .find(|a| &a.label == label)
                    .expect("validated script");
                let mut f = a.schema.clone();
                for (name, d) in bindings {
                    if !f.schematic_names().contains(name) {
                        return Err(invalid(format!("{label} has no schematic ${name}")));
                    }
                    if a.scope == BindingScope::EMembership && !d.is_e_membership(self.q) {
                        return Err(invalid(format!("{label} instantiated with an E-membership designator")));
                    }
                    f = f.bind_schematic(name, d);
                }
                if let Some(name) = f.schematic_names().into_iter().next() {
                    return Err(invalid(format!("a binding for ${name}")));
                }
                let free = f.free_vars();
                assumptions.insert(label.clone());
                M::with_prefix(&free, f)
            }
            RuleApp::Transpose(i) => {
                let (v, m) = one(i)?;
                let t = match m {
                    M::Iff(a, b) => M::iff(M::not(*a), M::not(*b)),
                    M::Implies(a, b) => M::implies(M::not(*b), M::not(*a)),
                    _ => return Err(invalid("A <-> B or A -> B")),
                };
                M::with_prefix(&v, t)
            }
            RuleApp::IffElimF(i) | RuleApp::IffElimB(i) => {
                let (v, m) = one(i)?;
                let M::Iff(a, b) = m else {
                    return Err(invalid("A <-> B"));
                };
                let forward = matches!(step.rule, RuleApp::IffElimF(_));
                M::with_prefix(&v, if forward { M::Implies(a, b) } else { M::Implies(b, a) })
            }
            RuleApp::Syllogism(i, j) => {
                let (v, mi, mj) = self.two(i, j)?;
                match (mi, mj) {
                    (M::Implies(a, b), M::Implies(b2, c)) if b == b2 => M::with_prefix(&v, M::Implies(a, c)),
                    _ => return Err(invalid("A -> B and B -> C")),
                }
            }
            RuleApp::IffIntro(i, j) => {
                let (v, mi, mj) = self.two(i, j)?;
                match (mi, mj) {
                    (M::Implies(b, a), M::Implies(a2, b2)) if a == a2 && b == b2 => M::with_prefix(&v, M::Iff(a, b)),
                    _ => return Err(invalid("B -> A and A -> B")),
                }
            }
            RuleApp::Instantiate { step: i, var, value } => {
                let (mut v, m) = one(i)?;
                let Some(pos) = v.iter().position(|x| x == var) else {
                    return Err(invalid(format!("a universal prefix binding {var}")));
                };
                v.remove(pos);
                M::with_prefix(&v, m.instantiate(var, *value))
            }
            RuleApp::RewriteE(i) | RuleApp::RewriteEBack(i) => {
                let f = self.formula(i)?;
                let q = self.q;
                let g = if matches!(step.rule, RuleApp::RewriteE(_)) {
                    f.map_designators(&|d| d.rewrite_e(q))
                } else {
                    f.map_designators(&|d| d.rewrite_e_back(q))
                };
                if &g == f {
                    return Err(invalid("an E-membership designator to rewrite"));
                }
                g
            }
            RuleApp::NegPush(i) => self.formula(i)?.clone(),
            RuleApp::ModusPonens(i, j) => {
                let (v, mi, mj) = self.two(i, j)?;
                match mj {
                    M::Implies(a, b) if *a == mi => M::with_prefix(&v, *b),
                    _ => return Err(invalid("A and A -> B")),
                }
            }
            RuleApp::Suppose(f) => {
                hypotheses.insert(step.id.clone());
                f.clone()
            }
            RuleApp::Reductio {
                hypothesis,
                positive,
                negative,
            } => {
                let h = self.cited(hypothesis)?;
                if !matches!(h.rule, RuleApp::Suppose(_)) {
                    return Err(invalid(format!("{hypothesis} to be a supposition")));
                }
                let p = self.formula(positive)?;
                let n = self.formula(negative)?;
                if n != &p.negated() {
                    return Err(invalid("phi and ~phi"));
                }
                hypotheses.remove(hypothesis);
                h.formula.as_ref().expect("valid").negated()
            }
        };
        let formula = formula.normalize();
        if let Some(claim) = &step.claim {
            if claim.normalize() != formula {
                return Err(invalid(format!("the stated formula; the rule yields {formula}")));
            }
        }
        Ok((formula, assumptions, hypotheses))
    }
}

// ---- ground atoms ----

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Atom {
    Assert(Designator),
    Dem(Designator),
}

/// Maps ground meta formulas to propositional ones. E-membership is
/// rewritten to the q-th formula and assertion of `¬d` is the negation of
/// asserting `d`; `Dem[d]` and `Dem[¬d]` stay unrelated.
struct Atoms {
    q: u64,
    index: BTreeMap<Atom, usize>,
}

impl Atoms {
    fn new(q: u64) -> Self {
        Atoms {
            q,
            index: BTreeMap::new(),
        }
    }

    fn atom(&mut self, a: Atom) -> Prop {
        let n = self.index.len();
        Prop::Atom(*self.index.entry(a).or_insert(n))
    }

    fn canonical(&self, d: &Designator) -> Designator {
        d.rewrite_e(self.q).normalize()
    }

    fn prop(&mut self, f: &MetaFormula) -> Prop {
        match f {
            MetaFormula::Assert(d) => {
                let d = self.canonical(d);
                let (base, odd) = d.polarity();
                let p = self.atom(Atom::Assert(base.clone()));
                if odd {
                    Prop::not(p)
                } else {
                    p
                }
            }
            MetaFormula::DemOf(d) => {
                let d = self.canonical(d);
                self.atom(Atom::Dem(d))
            }
            MetaFormula::Not(g) => Prop::not(self.prop(g)),
            MetaFormula::Implies(a, b) => {
                let (a, b) = (self.prop(a), self.prop(b));
                Prop::implies(a, b)
            }
            MetaFormula::Iff(a, b) => {
                let (a, b) = (self.prop(a), self.prop(b));
                Prop::iff(a, b)
            }
            MetaFormula::ForAll(..) => unreachable!("only ground formulas are translated"),
        }
    }

    fn dem(&mut self, d: &Designator) -> Prop {
        let d = self.canonical(d);
        self.atom(Atom::Dem(d))
    }

    /// Base designators of the atoms in `f`.
    fn bases(&self, f: &MetaFormula) -> BTreeSet<Designator> {
        let mut out = BTreeSet::new();
        f.for_each_designator(&mut |d| {
            out.insert(self.canonical(d).polarity().0.clone());
        });
        out
    }
}

/// Closed instance of a matrix: every free index variable set to 0.
fn ground_instance(f: &MetaFormula) -> MetaFormula {
    let (vars, m) = f.split_prefix();
    let mut g = m.clone();
    for v in vars.iter().chain(m.free_vars().iter()) {
        g = g.instantiate(v, 0);
    }
    g
}

/// Label of an assumption shaped `Dem[$X] -> ~Dem[~$X]`.
fn consistency_label(s: &DerivationScript, available: &BTreeSet<String>) -> Option<String> {
    s.assumptions.iter().find_map(|a| {
        let m = a.schema.normalize();
        let (vars, body) = m.split_prefix();
        let MetaFormula::Implies(lhs, rhs) = body else {
            return None;
        };
        let (MetaFormula::DemOf(Designator::Schematic(x)), MetaFormula::Not(r)) = (&**lhs, &**rhs) else {
            return None;
        };
        let expected = MetaFormula::DemOf(Designator::Schematic(x.clone()).negate());
        (vars.is_empty() && **r == expected && available.contains(&a.label)).then(|| a.label.clone())
    })
}

fn findings(
    script: &DerivationScript,
    available: &BTreeSet<String>,
    steps: &[StepOutcome],
    q: u64,
) -> Vec<Contradiction> {
    let cons = consistency_label(script, available);
    let mut out = Vec::new();
    for s in steps.iter().filter(|s| s.is_valid() && s.hypotheses.is_empty()) {
        let f = s.formula.as_ref().expect("valid");
        let (_, matrix) = f.split_prefix();
        let MetaFormula::Iff(a, b) = matrix else {
            continue;
        };
        let ground = ground_instance(f);
        if **b == a.negated() {
            let mut atoms = Atoms::new(q);
            let p = atoms.prop(&ground);
            out.push(Contradiction {
                step: s.id.clone(),
                pattern: Pattern::IffNegation,
                requires: vec![],
                assumptions: s.assumptions.clone(),
                ground_unsat: !sat::satisfiable(&[p]),
            });
            continue;
        }
        if let (MetaFormula::DemOf(x), MetaFormula::DemOf(y), Some(cons)) = (&**a, &**b, &cons) {
            if x.clone().negate() != *y {
                continue;
            }
            let MetaFormula::Iff(ga, gb) = &ground else {
                unreachable!("grounding keeps the shape")
            };
            let (MetaFormula::DemOf(d), MetaFormula::DemOf(nd)) = (&**ga, &**gb) else {
                unreachable!("grounding keeps the shape")
            };
            let mut atoms = Atoms::new(q);
            let step = atoms.prop(&ground);
            let (dd, dn) = (atoms.dem(d), atoms.dem(nd));
            let props = [
                step,
                Prop::implies(dd.clone(), Prop::not(dn.clone())),
                Prop::implies(dn.clone(), Prop::not(dd.clone())),
                Prop::Or(vec![dd, dn]),
            ];
            out.push(Contradiction {
                step: s.id.clone(),
                pattern: Pattern::DemNegIffDem,
                requires: vec![cons.clone()],
                assumptions: s.assumptions.clone(),
                ground_unsat: !sat::satisfiable(&props),
            });
        }
    }
    // cumulative pass over the ground facts, in script order
    let mut atoms = Atoms::new(q);
    let mut facts: Vec<(Prop, &StepOutcome)> = Vec::new();
    for s in steps.iter().filter(|s| s.is_ground_fact()) {
        facts.push((atoms.prop(s.formula.as_ref().expect("valid")), s));
        let props: Vec<Prop> = facts.iter().map(|(p, _)| p.clone()).collect();
        if !sat::satisfiable(&props) {
            out.push(Contradiction {
                step: s.id.clone(),
                pattern: Pattern::CumulativeUnsat,
                requires: vec![],
                assumptions: unsat_core(&facts)
                    .into_iter()
                    .flat_map(|s| s.assumptions.iter().cloned())
                    .collect(),
                ground_unsat: true,
            });
            break;
        }
    }
    let order: BTreeMap<&str, usize> = steps.iter().enumerate().map(|(i, s)| (s.id.as_str(), i)).collect();
    out.sort_by_key(|c| (order[c.step.as_str()], c.pattern));
    out
}

/// Deletion-minimal unsatisfiable subset of `facts`, which must be unsat.
fn unsat_core<'a>(facts: &[(Prop, &'a StepOutcome)]) -> Vec<&'a StepOutcome> {
    let mut keep: Vec<bool> = vec![true; facts.len()];
    for i in 0..facts.len() {
        keep[i] = false;
        let props: Vec<Prop> = facts
            .iter()
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|((p, _), _)| p.clone())
            .collect();
        if sat::satisfiable(&props) {
            keep[i] = true;
        }
    }
    facts
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|((_, s), _)| *s)
        .collect()
}

// ---- classification ----

/// Four-way verdict for `d` from the ground facts that mention it.
///
/// Only hypothesis-free ground facts whose atoms involve `d` are used, so
/// an inconsistency elsewhere in the script does not leak into unrelated
/// designators.
pub fn classify(d: &Designator, report: &AuditReport) -> Classification {
    let mut atoms = Atoms::new(report.q);
    let base = atoms.canonical(d).polarity().0.clone();
    let facts: Vec<Prop> = report
        .steps
        .iter()
        .filter(|s| s.is_ground_fact())
        .filter_map(|s| {
            let f = s.formula.as_ref().expect("valid");
            atoms.bases(f).contains(&base).then(|| atoms.prop(f))
        })
        .collect();
    if facts.is_empty() {
        return Classification::Unknown;
    }
    let pos = atoms.dem(d);
    let neg = atoms.dem(&d.clone().negate());
    let proves = |goal: &Prop| sat::entails(&facts, goal);
    let (p, n) = (proves(&pos), proves(&neg));
    let (np, nn) = (proves(&Prop::not(pos.clone())), proves(&Prop::not(neg.clone())));
    if p && n {
        Classification::Overdetermined
    } else if np && nn {
        Classification::Independent
    } else if p {
        Classification::Provable
    } else if n {
        Classification::Refutable
    } else {
        Classification::Unknown
    }
}

fn ground_designators(steps: &[StepOutcome], q: u64) -> BTreeSet<Designator> {
    let atoms = Atoms::new(q);
    steps
        .iter()
        .filter(|s| s.is_ground_fact())
        .flat_map(|s| atoms.bases(s.formula.as_ref().expect("valid")))
        .collect()
}

// ---- entry points ----

fn check_with(script: &DerivationScript, available: &BTreeSet<String>) -> AuditReport {
    let q = e_index();
    let mut checker = Checker {
        script,
        available,
        q,
        done: BTreeMap::new(),
    };
    let mut steps = Vec::with_capacity(script.steps.len());
    for step in &script.steps {
        let outcome = match checker.derive(step) {
            Ok((formula, assumptions, hypotheses)) => StepOutcome {
                id: step.id.clone(),
                rule: step.rule.clone(),
                formula: Some(formula),
                status: StepStatus::Valid,
                assumptions,
                hypotheses,
                note: step.note.clone(),
            },
            Err(status) => StepOutcome {
                id: step.id.clone(),
                rule: step.rule.clone(),
                formula: None,
                status,
                assumptions: BTreeSet::new(),
                hypotheses: BTreeSet::new(),
                note: step.note.clone(),
            },
        };
        checker.done.insert(step.id.as_str(), outcome.clone());
        steps.push(outcome);
    }
    let contradictions = findings(script, available, &steps, q);
    let mut report = AuditReport {
        script: script.name.clone(),
        q,
        steps,
        contradictions,
        minimal_inconsistent_subsets: None,
        classification: BTreeMap::new(),
    };
    for d in ground_designators(&report.steps, q) {
        let c = classify(&d, &report);
        report.classification.insert(d, c);
    }
    report
}

/// Checks every step against its rule with all assumptions available.
pub fn check_script(script: &DerivationScript) -> Result<AuditReport, ScriptError> {
    script.validate()?;
    let all: BTreeSet<String> = script.labels().into_iter().collect();
    Ok(check_with(script, &all))
}

/// Re-check with only `labels` available.
pub fn check_subset(script: &DerivationScript, labels: &BTreeSet<String>) -> AuditReport {
    check_with(script, labels)
}

/// [`check_script`] plus the minimal inconsistent subsets.
pub fn audit(script: &DerivationScript) -> Result<AuditReport, ScriptError> {
    let mut report = check_script(script)?;
    report.minimal_inconsistent_subsets = Some(minimal_inconsistent_subsets(script)?);
    Ok(report)
}

/// All ⊆-minimal assumption sets under which some unconditional
/// contradiction is still derived, sorted by size then lexicographically.
pub fn minimal_inconsistent_subsets(script: &DerivationScript) -> Result<Vec<Vec<String>>, ScriptError> {
    script.validate()?;
    let labels = script.labels();
    if labels.len() > MAX_CORE_LABELS {
        return Err(ScriptError::Syntax {
            line: 0,
            message: format!("core search supports at most {MAX_CORE_LABELS} assumptions"),
        });
    }
    let subset = |mask: u32| -> BTreeSet<String> {
        labels
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, l)| l.clone())
            .collect()
    };
    let masks: Vec<u32> = (0..1u32 << labels.len()).collect();
    let inconsistent: Vec<u32> = masks
        .par_iter()
        .copied()
        .filter(|&m| check_with(script, &subset(m)).is_inconsistent())
        .collect();
    let mut minimal: Vec<Vec<String>> = inconsistent
        .iter()
        .filter(|&&m| !inconsistent.iter().any(|&o| o != m && o & m == o))
        .map(|&m| subset(m).into_iter().collect())
        .collect();
    minimal.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(minimal)
}

/// Steps valid with every assumption but invalid without `label`.
pub fn killed_by(script: &DerivationScript, label: &str) -> Result<Vec<String>, ScriptError> {
    let full = check_script(script)?;
    let rest: BTreeSet<String> = script.labels().into_iter().filter(|l| l != label).collect();
    let reduced = check_with(script, &rest);
    Ok(full
        .steps
        .iter()
        .zip(&reduced.steps)
        .filter(|(a, b)| a.is_valid() && !b.is_valid())
        .map(|(a, _)| a.id.clone())
        .collect())
}

pub fn goedel_replay() -> AuditReport {
    audit(&goedel_script()).expect("shipped script")
}

pub fn goedel_replay_with_comp_e() -> AuditReport {
    audit(&goedel_script_with_comp_e()).expect("shipped script")
}

pub fn canonical_replay() -> AuditReport {
    audit(&canonical_script()).expect("shipped script")
}

/// `App(q,q)`, the designator of the Gödel sentence.
pub fn goedel_designator() -> Designator {
    Designator::App(IndexTerm::q(), IndexTerm::q())
}

/// Same script with reflection restricted to E-membership designators.
pub fn with_narrow_reflection(script: &DerivationScript, label: &str) -> DerivationScript {
    let mut s = script.clone();
    for a in s.assumptions.iter_mut().filter(|a| a.label == label) {
        a.scope = BindingScope::EMembership;
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModeComparison {
    pub canonical_consumed: BTreeSet<String>,
    pub goedel_consumed: BTreeSet<String>,
    pub only_canonical: BTreeSet<String>,
    pub only_goedel: BTreeSet<String>,
    pub shared: BTreeSet<String>,
    /// Assumptions behind the canonical run's flagged steps.
    pub canonical_contradiction_assumptions: BTreeSet<String>,
    pub canonical_verdict: Classification,
    pub goedel_verdict: Classification,
}

pub fn compare_modes() -> ModeComparison {
    let p = check_script(&canonical_script()).expect("shipped script");
    let g = check_script(&goedel_script()).expect("shipped script");
    let (pc, gc) = (p.consumed(), g.consumed());
    let d = goedel_designator();
    ModeComparison {
        only_canonical: pc.difference(&gc).cloned().collect(),
        only_goedel: gc.difference(&pc).cloned().collect(),
        shared: pc.intersection(&gc).cloned().collect(),
        canonical_contradiction_assumptions: p.contradiction_assumptions(),
        canonical_verdict: p.classify(&d),
        goedel_verdict: g.classify(&d),
        canonical_consumed: pc,
        goedel_consumed: gc,
    }
}

// ---- output ----

#[derive(Serialize)]
struct StepJson<'a> {
    id: &'a str,
    rule: String,
    formula: Option<String>,
    #[serde(flatten)]
    status: &'a StepStatus,
    assumptions: &'a BTreeSet<String>,
    hypotheses: &'a BTreeSet<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: &'a Option<String>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    schema: &'static str,
    script: &'a str,
    q: u64,
    all_valid: bool,
    numbered_steps: usize,
    steps: Vec<StepJson<'a>>,
    contradictions: &'a [Contradiction],
    minimal_inconsistent_subsets: &'a Option<Vec<Vec<String>>>,
    classification: BTreeMap<String, Classification>,
    consumed: BTreeSet<String>,
}

impl Serialize for AuditReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ReportJson {
            schema: REPORT_SCHEMA,
            script: &self.script,
            q: self.q,
            all_valid: self.all_valid(),
            numbered_steps: self.numbered_steps().len(),
            steps: self
                .steps
                .iter()
                .map(|st| StepJson {
                    id: &st.id,
                    rule: st.rule.to_string(),
                    formula: st.formula.as_ref().map(ToString::to_string),
                    status: &st.status,
                    assumptions: &st.assumptions,
                    hypotheses: &st.hypotheses,
                    note: &st.note,
                })
                .collect(),
            contradictions: &self.contradictions,
            minimal_inconsistent_subsets: &self.minimal_inconsistent_subsets,
            classification: self.classification.iter().map(|(d, c)| (d.to_string(), *c)).collect(),
            consumed: self.consumed(),
        }
        .serialize(s)
    }
}

fn set(s: &BTreeSet<String>) -> String {
    format!("{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(", "))
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "script {} (q = {})", self.script, self.q)?;
        for s in &self.steps {
            let status = match &s.status {
                StepStatus::Valid => "ok".to_string(),
                StepStatus::Invalid { expected } => format!("INVALID, expected {expected}"),
                StepStatus::Killed { because } => format!("killed by {because}"),
            };
            let formula = s.formula.as_ref().map(ToString::to_string).unwrap_or_default();
            write!(
                f,
                "  ({}) {:<14} {status:<6} {formula}  {}",
                s.id,
                s.rule.name(),
                set(&s.assumptions)
            )?;
            if !s.hypotheses.is_empty() {
                write!(f, " under {}", set(&s.hypotheses))?;
            }
            writeln!(f)?;
        }
        writeln!(f, "contradictions:")?;
        for c in &self.contradictions {
            let pattern = match c.pattern {
                Pattern::IffNegation => "phi <-> ~phi",
                Pattern::DemNegIffDem => "Dem[~d] <-> Dem[d]",
                Pattern::CumulativeUnsat => "ground facts unsatisfiable",
            };
            write!(f, "  ({}) {pattern} from {}", c.step, set(&c.assumptions))?;
            if !c.requires.is_empty() {
                write!(f, " with {}", c.requires.join(", "))?;
            }
            writeln!(f, "; ground check {}", if c.ground_unsat { "unsat" } else { "sat" })?;
        }
        if let Some(cores) = &self.minimal_inconsistent_subsets {
            writeln!(f, "minimal inconsistent assumption sets:")?;
            for c in cores {
                writeln!(f, "  {{{}}}", c.join(", "))?;
            }
        }
        writeln!(f, "classification:")?;
        for (d, c) in &self.classification {
            writeln!(f, "  {d}: {c}")?;
        }
        Ok(())
    }
}
