//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use goedel_core::audit::{canonical_replay, canonical_script, check_subset, minimal_inconsistent_subsets, Pattern};
use goedel_core::codec::{encode_formula, formula_at, index_of, sub_num, UnaryIndex};
use goedel_core::diag::{goedel_sentence, self_reference_holds};
use goedel_core::kernel::{
    check_proof, identity_proof, parse_proof, AxiomInstance, Invalid, Justification, SchemaId, Verdict,
};
use goedel_core::modal::{corpus, find_model, is_valid, ModelSearch, Validity, MAX_SEARCH_WORLDS};
use goedel_core::{decode_formula, parse_formula, parse_modal, Formula, GoedelNumber, Logic, ModalFormula, Nat, Term};
use num_bigint::BigUint;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn goedel_json(args: &[&str]) -> Result<(Value, Duration), String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_goedel"))
        .args(args)
        .env_remove("GOEDEL_CACHE_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(out.status.success(), "goedel {args:?} exited {:?}", out.status.code());
    let v = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    Ok((v, elapsed))
}

fn codec_round_trip() -> Outcome {
    let start = Instant::now();
    let mut runner = TestRunner::deterministic();
    let strategy = common::formula(3);
    let mut deepest = 0;
    for i in 0..10_000 {
        let f = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        ensure!(f.depth() <= 6, "generated formula {i} has depth {}", f.depth());
        deepest = deepest.max(f.depth());
        let back = decode_formula(&encode_formula(&f)).map_err(|e| format!("{f}: {e}"))?;
        ensure!(back == f, "round trip changed {f} into {back}");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:.2?}");
    Ok(format!("10000 formulas, max depth {deepest}, 0 failures"))
}

fn worked_constants() -> Outcome {
    let p = |b: u64, e: u32| BigUint::from(b).pow(e);
    let eq = p(2, 4) * p(3, 8) * p(5, 8);
    let dem = p(2, 5) * p(3, 13);
    ensure!(eq == BigUint::from(41_006_250_000u64), "Eq(0,0) product is {eq}");
    ensure!(dem == BigUint::from(51_018_336u64), "Dem(x0) product is {dem}");
    for (text, expected) in [("0 = 0", eq), ("Dem(x0)", dem)] {
        let f = parse_formula(text).unwrap();
        let g = encode_formula(&f);
        ensure!(g.value() == &Nat::from(expected.clone()), "encode({text}) = {g}");
        let back = decode_formula(&GoedelNumber::new(Nat::from(expected)).unwrap()).map_err(|e| e.to_string())?;
        ensure!(back == f, "decode gave {back}");
    }
    Ok("41006250000 and 51018336, both decoded back".into())
}

fn enumeration_oracle() -> Outcome {
    let bound = 1_000_000_000_000u128;
    let expected = common::codes::oracle(bound);
    ensure!(!expected.is_empty(), "oracle found nothing");
    for (i, (code, f)) in expected.iter().enumerate() {
        let at = formula_at(UnaryIndex(i as u64)).map_err(|e| e.to_string())?;
        ensure!(&at == f, "formula_at({i}) = {at}, oracle {f}");
        ensure!(
            encode_formula(&at).value() == &Nat::from(code.clone()),
            "code of index {i}"
        );
        let idx = index_of(f).map_err(|e| e.to_string())?;
        ensure!(idx == UnaryIndex(i as u64), "index_of({f}) = {idx}");
    }
    let next = formula_at(UnaryIndex(expected.len() as u64)).map_err(|e| e.to_string())?;
    ensure!(
        encode_formula(&next)
            .value()
            .as_biguint()
            .map_or(true, |c| c > &BigUint::from(bound)),
        "index {} is still below the bound",
        expected.len()
    );
    let first = formula_at(UnaryIndex(0)).unwrap();
    ensure!(first == parse_formula("Dem(x0)").unwrap(), "formula_at(0) = {first}");
    Ok(format!(
        "{} unary formulas up to 10^12 agree; formula_at(0) = {first}",
        expected.len()
    ))
}

fn fixed_point() -> Outcome {
    let cert = goedel_sentence().map_err(|e| e.to_string())?;
    ensure!(cert.fixed_point_checked, "certificate not checked");
    let q = cert.q.0;
    let symbolic = encode_formula(&cert.psi.substitute(0, &Term::numeral(q)).unwrap());
    let numeric = sub_num(&Nat::from(q), &Nat::from(q)).map_err(|e| e.to_string())?;
    ensure!(symbolic == numeric, "routes disagree at q = {q}");
    ensure!(cert.sentence_code == numeric, "certificate code differs");
    ensure!(
        self_reference_holds(&cert).map_err(|e| e.to_string())?,
        "Dem argument does not evaluate to the code"
    );
    Ok(format!("q = {q}, sentence {}", cert.sentence))
}

fn replay_fidelity() -> Outcome {
    let (v, elapsed) = goedel_json(&["audit", "canonical", "--json"])?;
    ensure!(elapsed < Duration::from_secs(1), "audit canonical took {elapsed:.2?}");
    ensure!(v["numbered_steps"] == 11, "numbered steps {}", v["numbered_steps"]);
    let steps = v["steps"].as_array().unwrap();
    for n in 1..=9 {
        let id = n.to_string();
        let s = steps
            .iter()
            .find(|s| s["id"] == id.as_str())
            .ok_or(format!("no step {n}"))?;
        ensure!(s["status"] == "valid", "step {n} is {}", s["status"]);
    }
    let r = canonical_replay();
    let flagged = r.flagged_steps();
    ensure!(
        flagged == BTreeSet::from(["10".to_string(), "11".to_string()]),
        "flagged {flagged:?}"
    );
    let at = |step: &str, pattern: Pattern| r.contradictions.iter().find(|c| c.step == step && c.pattern == pattern);
    let eleven = at("11", Pattern::IffNegation).ok_or("(11) not flagged as phi <-> ~phi")?;
    ensure!(
        eleven.is_unconditional() && eleven.ground_unsat,
        "(11) finding {eleven:?}"
    );
    let ten = at("10", Pattern::DemNegIffDem).ok_or("(10) not flagged as Dem[~d] <-> Dem[d]")?;
    ensure!(ten.requires == ["CONS"] && ten.ground_unsat, "(10) finding {ten:?}");
    let cli_flagged: BTreeSet<&str> = v["contradictions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["step"].as_str().unwrap())
        .collect();
    ensure!(
        cli_flagged == BTreeSet::from(["10", "11"]),
        "CLI flagged {cli_flagged:?}"
    );
    Ok(format!(
        "(1)-(9) valid, (10) with CONS, (11) phi <-> ~phi, {elapsed:.2?}"
    ))
}

fn assumption_audit() -> Outcome {
    let script = canonical_script();
    let cores = minimal_inconsistent_subsets(&script).map_err(|e| e.to_string())?;
    ensure!(!cores.is_empty(), "no cores");
    for core in &cores {
        ensure!(core != &["DEF_E"], "{{DEF_E}} returned");
        let set: BTreeSet<String> = core.iter().cloned().collect();
        ensure!(
            check_subset(&script, &set).is_inconsistent(),
            "{core:?} re-checks consistent"
        );
        for mask in 0..(1u32 << core.len()) - 1 {
            let proper: BTreeSet<String> = core
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, l)| l.clone())
                .collect();
            ensure!(
                !check_subset(&script, &proper).is_inconsistent(),
                "proper subset {proper:?} inconsistent"
            );
        }
    }
    let shown: Vec<String> = cores.iter().map(|c| format!("{{{}}}", c.join(", "))).collect();
    Ok(format!("cores {}", shown.join(" ")))
}

fn mode_contrast() -> Outcome {
    let (g, _) = goedel_json(&["audit", "goedel", "--json"])?;
    ensure!(
        g["classification"]["App(q,q)"] == "independent",
        "App(q,q) is {}",
        g["classification"]["App(q,q)"]
    );
    let consumed: BTreeSet<&str> = g["consumed"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap())
        .collect();
    ensure!(
        consumed == BTreeSet::from(["CONS", "DEF_E", "REFL"]),
        "goedel consumed {consumed:?}"
    );
    let (c, _) = goedel_json(&["audit", "compare", "--json"])?;
    let set = |k: &str| -> BTreeSet<String> {
        c[k].as_array()
            .unwrap()
            .iter()
            .map(|s| s.as_str().unwrap().to_string())
            .collect()
    };
    let only = set("only_canonical");
    ensure!(only.contains("COMP_E"), "COMP_E not exclusive: {only:?}");
    if set("canonical_consumed").contains("NEC_DEF") {
        ensure!(only.contains("NEC_DEF"), "NEC_DEF consumed but shared");
    }
    ensure!(set("goedel_consumed").is_disjoint(&only), "overlap");
    Ok(format!("goedel independent on {consumed:?}; only canonical {only:?}"))
}

fn modal_oracle() -> Outcome {
    let m = |s: &str| parse_modal(s).unwrap();
    match find_model(&m("p0 <-> ~[]p0"), Logic::GL, MAX_SEARCH_WORLDS).map_err(|e| e.to_string())? {
        ModelSearch::Model { model } => ensure!(model.worlds == 1, "fixed point needs {} worlds", model.worlds),
        other => return Err(format!("fixed point: {other:?}")),
    }
    for logic in Logic::ALL {
        for bound in 1..=MAX_SEARCH_WORLDS {
            let r = find_model(&m("[]p0 <-> ~[]p0"), logic, bound).map_err(|e| e.to_string())?;
            ensure!(
                r == ModelSearch::NoneUpTo { worlds: bound },
                "liar in {logic} at {bound}: {r:?}"
            );
        }
    }
    let loeb = m("[]([]p0 -> p0) -> []p0");
    ensure!(
        is_valid(&loeb, Logic::GL) == Ok(Validity::Valid),
        "Loeb not valid in GL"
    );
    match is_valid(&loeb, Logic::K).map_err(|e| e.to_string())? {
        Validity::Countermodel { model } => {
            ensure!(model.worlds <= 2 && !model.eval(0, &loeb), "K countermodel {model:?}")
        }
        Validity::Valid => return Err("Loeb valid in K".into()),
    }
    let corpus = corpus();
    ensure!(corpus.len() >= 30, "corpus has {} formulas", corpus.len());
    let mut checks = 0;
    for s in &corpus {
        let f = m(s);
        let neg = ModalFormula::not(f.clone());
        for logic in Logic::ALL {
            let valid = is_valid(&f, logic).map_err(|e| e.to_string())?;
            let search = find_model(&neg, logic, MAX_SEARCH_WORLDS).map_err(|e| e.to_string())?;
            match (&valid, &search) {
                (Validity::Valid, ModelSearch::NoneUpTo { .. }) => {}
                (Validity::Countermodel { model }, ModelSearch::Model { model: found }) => {
                    ensure!(
                        model.frame_ok() && !model.eval(0, &f),
                        "{s} in {logic}: bad countermodel"
                    );
                    ensure!(found.frame_ok() && found.eval(0, &neg), "{s} in {logic}: bad model");
                }
                (Validity::Countermodel { model }, ModelSearch::NoneUpTo { .. })
                    if model.worlds > MAX_SEARCH_WORLDS =>
                {
                    ensure!(
                        model.frame_ok() && !model.eval(0, &f),
                        "{s} in {logic}: bad countermodel"
                    );
                }
                _ => return Err(format!("{s} in {logic}: tableau {valid:?}, search {search:?}")),
            }
            checks += 1;
        }
    }
    Ok(format!("{} corpus formulas, {checks} logic pairs agree", corpus.len()))
}

fn kernel_soundness() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../proofs");
    let mut shipped = 0;
    let mut paths: Vec<_> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    for path in paths.iter().filter(|p| p.extension().is_some_and(|x| x == "proof")) {
        let proof = parse_proof(&std::fs::read_to_string(path).unwrap()).map_err(|e| e.to_string())?;
        if check_proof(&proof).is_valid() {
            ensure!(proof.premises.is_empty(), "{} has premises", path.display());
            for step in &proof.steps {
                ensure!(
                    common::taut::tautology(&step.formula),
                    "{}: {} not confirmed",
                    path.display(),
                    step.formula
                );
            }
            shipped += 1;
        }
    }
    ensure!(shipped > 0, "no shipped proofs");

    let a = parse_formula("Dem(sub(x0, x0)) -> ~x0 = 0").unwrap();
    let id = identity_proof(&a);
    ensure!(id.steps.len() == 5, "identity proof has {} steps", id.steps.len());
    ensure!(check_proof(&id) == Verdict::Valid, "identity proof rejected");
    let aa = Formula::implies(a.clone(), a.clone());
    ensure!(id.conclusion() == Some(&aa), "identity proof proves something else");

    let mut mutated = id.clone();
    let k = 3;
    mutated.steps[k].justification = Justification::Axiom(AxiomInstance::P1 {
        a: a.clone(),
        b: Formula::not(a.clone()),
    });
    let verdict = check_proof(&mutated);
    ensure!(
        verdict
            == Verdict::Invalid {
                step: k + 1,
                reason: Invalid::SchemaMismatch(SchemaId::P1)
            },
        "mutated copy: {verdict:?}"
    );
    Ok(format!(
        "{shipped} shipped proofs confirmed; A -> A in 5 steps; mutation caught at step {}",
        k + 1
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("codec round trip", codec_round_trip),
        ("worked constants", worked_constants),
        ("enumeration oracle", enumeration_oracle),
        ("fixed-point certificate", fixed_point),
        ("canonical replay", replay_fidelity),
        ("assumption audit", assumption_audit),
        ("mode contrast", mode_contrast),
        ("modal oracle", modal_oracle),
        ("kernel soundness", kernel_soundness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
