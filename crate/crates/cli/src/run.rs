use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use goedel_core::audit::{
    self, audit, canonical_replay, goedel_replay, minimal_inconsistent_subsets, parse_script, ScriptError,
};
use goedel_core::codec::{diag_num, sub_num, Enumerator};
use goedel_core::diag::{diagonalize_template, goedel_sentence, DiagError};
use goedel_core::kernel::{check_proof, parse_proof, EvalError, Verdict};
use goedel_core::modal::{find_model, is_valid, schema_verdicts, ModalError, ModelSearch, Validity};
use goedel_core::{
    decode_formula, encode_formula, parse_formula, parse_modal, CodecError, GoedelNumber, KripkeModel, Nat,
};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::{AuditCommand, Cli, Command, ModelCommand, ProveCommand};

const CACHE_FILE: &str = "index-v1.txt";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl From<CodecError> for CliError {
    fn from(e: CodecError) -> Self {
        match e {
            CodecError::ResourceBound(_) => CliError::Resource(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<DiagError> for CliError {
    fn from(e: DiagError) -> Self {
        match e {
            DiagError::Codec(c) | DiagError::Eval(EvalError::Codec(c)) => c.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<ModalError> for CliError {
    fn from(e: ModalError) -> Self {
        match e {
            ModalError::ResourceBound(_) => CliError::Resource(e.to_string()),
            ModalError::WorldBound => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<ScriptError> for CliError {
    fn from(e: ScriptError) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// What the process prints and how it exits. A failed check can carry
/// both a report and an error.
pub struct Outcome {
    pub stdout: Option<String>,
    pub error: Option<CliError>,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        self.error.as_ref().map_or(0, CliError::exit_code)
    }
}

impl From<Result<String, CliError>> for Outcome {
    fn from(r: Result<String, CliError>) -> Self {
        match r {
            Ok(s) => Outcome {
                stdout: Some(s),
                error: None,
            },
            Err(e) => Outcome {
                stdout: None,
                error: Some(e),
            },
        }
    }
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn formula(text: &str) -> Result<goedel_core::Formula, CliError> {
    parse_formula(text).map_err(|e| CliError::Domain(format!("formula: {e}")))
}

fn modal(text: &str) -> Result<goedel_core::ModalFormula, CliError> {
    parse_modal(text).map_err(|e| CliError::Domain(format!("modal formula: {e}")))
}

fn nat(text: &str) -> Result<Nat, CliError> {
    text.parse()
        .map_err(|e: goedel_core::NatError| CliError::Domain(e.to_string()))
}

fn goedel_number(text: &str) -> Result<GoedelNumber, CliError> {
    Ok(GoedelNumber::new(nat(text)?)?)
}

pub fn dispatch(cli: &Cli) -> Outcome {
    if let Some(dir) = &cli.cache_dir {
        Enumerator::global().attach_cache_file(&dir.join(CACHE_FILE));
    }
    let mut outcome = command(cli);
    if cli.cache_dir.is_some() {
        if let Err(e) = Enumerator::global().persist() {
            outcome.error.get_or_insert(CliError::Domain(format!("cache: {e}")));
        }
    }
    outcome
}

fn command(cli: &Cli) -> Outcome {
    let json = cli.json;
    match &cli.command {
        Command::Encode { formula: text } => encode(text, json).into(),
        Command::Decode { number } => decode(number, json).into(),
        Command::Enumerate { up_to } => enumerate(*up_to, json).into(),
        Command::Subnum { n, m } => subnum(n, m, json).into(),
        Command::Diagnum { g } => diagnum(g, json).into(),
        Command::Diagonalize { template } => diagonalize(template.as_deref()),
        Command::Prove(ProveCommand::Check { file }) => prove_check(file, json),
        Command::Audit(a) => audit_command(a, json).into(),
        Command::Model(m) => model_command(m, json).into(),
    }
}

fn encode(text: &str, json: bool) -> Result<String, CliError> {
    let f = formula(text)?;
    let g = encode_formula(&f);
    Ok(if json {
        to_json(&json!({ "schema": "encode/1", "formula": f.to_string(), "code_hex": g }))
    } else {
        g.to_string()
    })
}

fn decode(number: &str, json: bool) -> Result<String, CliError> {
    let g = goedel_number(number)?;
    let f = decode_formula(&g)?;
    Ok(if json {
        to_json(&json!({ "schema": "decode/1", "code_hex": g, "formula": f.to_string() }))
    } else {
        f.to_string()
    })
}

fn enumerate(up_to: u64, json: bool) -> Result<String, CliError> {
    let count = usize::try_from(up_to).map_err(|_| CliError::Usage("--up-to too large".into()))?;
    let entries = Enumerator::global().first(count)?;
    if json {
        let rows: Vec<_> = entries
            .iter()
            .enumerate()
            .map(|(i, (code, f))| json!({ "index": i, "code_hex": Nat::from(code.clone()), "formula": f.to_string() }))
            .collect();
        return Ok(to_json(
            &json!({ "schema": "enumerate/1", "up_to": up_to, "entries": rows }),
        ));
    }
    let mut out = String::new();
    for (i, (code, f)) in entries.iter().enumerate() {
        let _ = writeln!(out, "{i}\t{code}\t{f}");
    }
    Ok(out)
}

fn numeric(schema: &str, inputs: serde_json::Value, value: &GoedelNumber, json: bool) -> String {
    if json {
        let mut v = json!({ "schema": schema });
        v.as_object_mut().unwrap().extend(inputs.as_object().unwrap().clone());
        v["value_hex"] = json!(value);
        to_json(&v)
    } else {
        value.to_string()
    }
}

fn subnum(n: &str, m: &str, json: bool) -> Result<String, CliError> {
    let (n, m) = (nat(n)?, nat(m)?);
    let v = sub_num(&n, &m)?;
    Ok(numeric("subnum/1", json!({ "n_hex": n, "m_hex": m }), &v, json))
}

fn diagnum(g: &str, json: bool) -> Result<String, CliError> {
    let g = goedel_number(g)?;
    let v = diag_num(&g)?;
    Ok(numeric("diagnum/1", json!({ "g_hex": g }), &v, json))
}

fn diagonalize(template: Option<&str>) -> Outcome {
    let cert = match template {
        None => goedel_sentence(),
        Some(t) => match formula(t) {
            Ok(f) => diagonalize_template(&f),
            Err(e) => return Err(e).into(),
        },
    };
    match cert {
        Ok(c) => Outcome {
            stdout: Some(to_json(&c)),
            error: (!c.fixed_point_checked)
                .then(|| CliError::Domain("fixed point failed: the two routes to the sentence code disagree".into())),
        },
        Err(e) => Err(CliError::from(e)).into(),
    }
}

fn prove_check(file: &Path, json: bool) -> Outcome {
    let text = match read(file) {
        Ok(t) => t,
        Err(e) => return Err(e).into(),
    };
    let proof = match parse_proof(&text) {
        Ok(p) => p,
        Err(e) => return Err(CliError::Domain(format!("{}: {e}", file.display()))).into(),
    };
    let verdict = check_proof(&proof);
    let conclusion = proof.conclusion().map(ToString::to_string);
    let stdout = match (&verdict, json) {
        (Verdict::Valid, true) => to_json(&json!({
            "schema": "proof-check/1",
            "verdict": "valid",
            "steps": proof.steps.len(),
            "premises": proof.premises.keys().collect::<Vec<_>>(),
            "conclusion": conclusion,
            "code_hex": proof.code(),
        })),
        (Verdict::Invalid { step, reason }, true) => to_json(&json!({
            "schema": "proof-check/1",
            "verdict": "invalid",
            "steps": proof.steps.len(),
            "step": step,
            "reason": reason.code(),
            "message": reason.to_string(),
        })),
        (Verdict::Valid, false) => format!(
            "valid: {} steps proving {}",
            proof.steps.len(),
            conclusion.unwrap_or_default()
        ),
        (Verdict::Invalid { step, reason }, false) => format!("invalid at step {step}: {reason}"),
    };
    Outcome {
        stdout: Some(stdout),
        error: match verdict {
            Verdict::Valid => None,
            Verdict::Invalid { step, .. } => Some(CliError::Domain(format!("proof invalid at step {step}"))),
        },
    }
}

fn report(r: &audit::AuditReport, json: bool) -> String {
    if json {
        to_json(r)
    } else {
        r.to_string()
    }
}

fn script_name(file: &Path) -> String {
    file.file_stem()
        .map_or_else(|| "script".into(), |s| s.to_string_lossy().into_owned())
}

fn audit_command(cmd: &AuditCommand, json: bool) -> Result<String, CliError> {
    match cmd {
        AuditCommand::Run { file } => {
            let script = parse_script(&script_name(file), &read(file)?)?;
            Ok(report(&audit(&script)?, json))
        }
        AuditCommand::Canonical => Ok(report(&canonical_replay(), json)),
        AuditCommand::Goedel => Ok(report(&goedel_replay(), json)),
        AuditCommand::Compare => {
            let m = audit::compare_modes();
            if json {
                let mut v = serde_json::to_value(&m).expect("serializable");
                v["schema"] = json!("audit-compare/1");
                return Ok(to_json(&v));
            }
            let set = |s: &std::collections::BTreeSet<String>| {
                format!("{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(", "))
            };
            let mut out = String::new();
            let _ = writeln!(out, "canonical consumed: {}", set(&m.canonical_consumed));
            let _ = writeln!(out, "goedel consumed:    {}", set(&m.goedel_consumed));
            let _ = writeln!(out, "only canonical:     {}", set(&m.only_canonical));
            let _ = writeln!(out, "only goedel:        {}", set(&m.only_goedel));
            let _ = writeln!(out, "shared:             {}", set(&m.shared));
            let _ = writeln!(
                out,
                "canonical contradictions rest on {}",
                set(&m.canonical_contradiction_assumptions)
            );
            let _ = writeln!(
                out,
                "App(q,q): canonical {}, goedel {}",
                m.canonical_verdict, m.goedel_verdict
            );
            Ok(out)
        }
        AuditCommand::Cores { file } => {
            let script = parse_script(&script_name(file), &read(file)?)?;
            let cores = minimal_inconsistent_subsets(&script)?;
            if json {
                return Ok(to_json(
                    &json!({ "schema": "audit-cores/1", "script": script.name, "cores": cores }),
                ));
            }
            if cores.is_empty() {
                return Ok("no inconsistent assumption set\n".into());
            }
            Ok(cores.iter().map(|c| format!("{{{}}}\n", c.join(", "))).collect())
        }
    }
}

fn model_command(cmd: &ModelCommand, json: bool) -> Result<String, CliError> {
    match cmd {
        ModelCommand::Check { modal: args, model } => {
            let f = modal(&args.formula)?;
            let m: KripkeModel = serde_json::from_str(&read(model)?)
                .map_err(|e| CliError::Domain(format!("{}: {e}", model.display())))?;
            if m.logic != args.logic {
                return Err(CliError::Domain(format!(
                    "model is tagged {} but --logic is {}",
                    m.logic, args.logic
                )));
            }
            if !m.frame_ok() {
                return Err(CliError::Domain(format!(
                    "model violates the {} frame conditions",
                    m.logic
                )));
            }
            if m.worlds == 0 {
                return Err(CliError::Domain("model has no worlds".into()));
            }
            if f.atom_bound() > 0 && m.valuation.is_empty() {
                return Err(CliError::Domain("model has no valuation".into()));
            }
            let holds = m.eval(0, &f);
            Ok(if json {
                to_json(
                    &json!({ "schema": "model-check/1", "formula": f.to_string(), "logic": m.logic, "holds": holds }),
                )
            } else {
                format!("{holds}")
            })
        }
        ModelCommand::Find {
            modal: args,
            max_worlds,
        } => {
            let f = modal(&args.formula)?;
            let r = find_model(&f, args.logic, *max_worlds)?;
            if json {
                let mut v = serde_json::to_value(&r).expect("serializable");
                v["schema"] = json!("model-find/1");
                v["formula"] = json!(f.to_string());
                v["logic"] = json!(args.logic);
                return Ok(to_json(&v));
            }
            Ok(match r {
                ModelSearch::Model { model } => format!("satisfiable\n{}", describe(&model)),
                ModelSearch::NoneUpTo { worlds } => format!("no model with at most {worlds} worlds"),
            })
        }
        ModelCommand::Valid { modal: args } => {
            let f = modal(&args.formula)?;
            let r = is_valid(&f, args.logic)?;
            if json {
                let mut v = serde_json::to_value(&r).expect("serializable");
                v["schema"] = json!("model-valid/1");
                v["formula"] = json!(f.to_string());
                v["logic"] = json!(args.logic);
                return Ok(to_json(&v));
            }
            Ok(match r {
                Validity::Valid => format!("valid in {}", args.logic),
                Validity::Countermodel { model } => format!("not valid; countermodel\n{}", describe(&model)),
            })
        }
        ModelCommand::Schemas => {
            let rows = schema_verdicts()?;
            if json {
                return Ok(to_json(&json!({ "schema": "model-schemas/1", "rows": rows })));
            }
            let mut out = String::new();
            for r in rows {
                let verdict = serde_json::to_value(r.verdict).expect("serializable");
                let _ = writeln!(out, "{:<52} {:<3} {}", r.name, r.logic, compact(&verdict));
            }
            Ok(out)
        }
    }
}

fn compact(v: &serde_json::Value) -> String {
    let obj = v.as_object().expect("verdicts serialize as objects");
    let mut out = obj["verdict"].as_str().unwrap_or_default().to_string();
    for (k, val) in obj.iter().filter(|(k, _)| *k != "verdict") {
        let _ = write!(out, " {k}={val}");
    }
    out
}

fn describe(m: &KripkeModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "worlds: {} ({})", m.worlds, m.logic);
    let edges: Vec<String> = m.relation.iter().map(|(a, b)| format!("{a}->{b}")).collect();
    let _ = writeln!(
        out,
        "relation: {}",
        if edges.is_empty() {
            "none".into()
        } else {
            edges.join(" ")
        }
    );
    for (w, atoms) in m.valuation.iter().enumerate() {
        let atoms: Vec<String> = atoms.iter().map(|p| format!("p{p}")).collect();
        let _ = writeln!(out, "  w{w}: {}", atoms.join(" "));
    }
    out
}
