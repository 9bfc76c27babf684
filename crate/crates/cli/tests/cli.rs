//! End-to-end runs of the `goedel` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn goedel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goedel"))
        .args(args)
        .env_remove("GOEDEL_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = goedel(args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn proofs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../proofs")
}

#[test]
fn decode_one_is_not_well_formed() {
    let o = goedel(&["decode", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not-well-formed: empty sequence"));
}

#[test]
fn encode_and_decode_worked_constants() {
    assert_eq!(stdout(&goedel(&["encode", "0 = 0"])).trim(), "41006250000");
    assert_eq!(stdout(&goedel(&["encode", "Dem(x0)"])).trim(), "51018336");
    assert_eq!(stdout(&goedel(&["decode", "41006250000"])).trim(), "0 = 0");
    let v = json(&["encode", "Dem(x0)", "--json"]);
    assert_eq!(v["schema"], "encode/1");
    assert_eq!(v["code_hex"], "7:30a7a60");
    assert_eq!(stdout(&goedel(&["decode", "7:30a7a60"])).trim(), "Dem(x0)");
}

#[test]
fn enumerate_lists_indices_below_the_bound() {
    let v = json(&["enumerate", "--up-to", "2", "--json"]);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0]["formula"], "Dem(x0)");
    assert_eq!(entries[1]["formula"], "~Dem(x0)");
}

#[test]
fn subnum_and_diagnum() {
    assert_eq!(stdout(&goedel(&["subnum", "0", "0"])).trim(), "209952");
    // diag of Dem(x0) is Dem(S^51018336(0)), far too large to print in decimal
    let v = json(&["diagnum", "51018336", "--json"]);
    assert_eq!(v["schema"], "diagnum/1");
    assert!(v["value_hex"].as_str().unwrap().starts_with('['));
}

#[test]
fn diagonalize_prints_a_checked_certificate() {
    let v = json(&["diagonalize"]);
    assert_eq!(v["fixed_point_checked"], true);
    assert_eq!(v["q"], 169);
    assert_eq!(v["sentence"], "~Dem(sub(S^169(0),S^169(0)))");
    let v = json(&["diagonalize", "--template", "~Dem(x0)"]);
    assert_eq!(v["q"], 169);
}

#[test]
fn audit_canonical_json() {
    let v = json(&["audit", "canonical", "--json"]);
    assert_eq!(v["schema"], "audit/1");
    assert_eq!(v["numbered_steps"], 11);
    assert_eq!(v["all_valid"], true);
    let flagged: Vec<&str> = v["contradictions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["step"].as_str().unwrap())
        .collect();
    assert!(flagged.iter().all(|s| *s == "10" || *s == "11"));
    assert!(flagged.contains(&"10") && flagged.contains(&"11"));
    assert_eq!(v["classification"]["App(q,q)"], "overdetermined");
    assert_eq!(
        v["minimal_inconsistent_subsets"],
        serde_json::json!([["COMP_E", "DEF_E", "REFL"]])
    );
}

#[test]
fn audit_goedel_and_compare() {
    let v = json(&["audit", "goedel", "--json"]);
    assert_eq!(v["classification"]["App(q,q)"], "independent");
    assert_eq!(v["consumed"], serde_json::json!(["CONS", "DEF_E", "REFL"]));
    let v = json(&["audit", "compare", "--json"]);
    assert_eq!(v["only_canonical"], serde_json::json!(["COMP_E", "NEC_DEF"]));
    assert_eq!(v["only_goedel"], serde_json::json!(["CONS"]));
}

#[test]
fn audit_run_and_cores_read_script_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("canonical.audit");
    let text = goedel_core::audit::canonical_script().to_text();
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let run = json(&["audit", "run", p, "--json"]);
    assert_eq!(run["script"], "canonical");
    let canonical = json(&["audit", "canonical", "--json"]);
    assert_eq!(run["steps"], canonical["steps"]);
    assert_eq!(stdout(&goedel(&["audit", "cores", p])), "{COMP_E, DEF_E, REFL}\n");

    std::fs::write(&path, "assume A : all n. InE(n)\nstep 1 := use B\n").unwrap();
    let o = goedel(&["audit", "run", p]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn prove_check_shipped_and_broken_proofs() {
    for entry in std::fs::read_dir(proofs_dir()).unwrap() {
        let path = entry.unwrap().path();
        let v = json(&["prove", "check", path.to_str().unwrap(), "--json"]);
        assert_eq!(v["verdict"], "valid", "{}", path.display());
    }
    let text = std::fs::read_to_string(proofs_dir().join("identity.proof")).unwrap();
    let broken = text.replacen(
        "ax P1 {A: ~Dem(sub(0,0))} {B: ~Dem(sub(0,0))}",
        "ax P1 {A: ~Dem(sub(0,0))} {B: Dem(0)}",
        1,
    );
    assert_ne!(broken, text);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.proof");
    std::fs::write(&path, broken).unwrap();
    let o = goedel(&["prove", "check", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "invalid");
    assert_eq!(v["step"], 4);
    assert_eq!(v["reason"], "schema-mismatch");
}

#[test]
fn model_commands() {
    let v = json(&["model", "find", "p0 <-> ~[]p0", "--logic", "GL", "--json"]);
    assert_eq!(v["result"], "model");
    assert_eq!(v["model"]["worlds"], 1);
    let v = json(&["model", "find", "[]p0 <-> ~[]p0", "--logic", "K", "--json"]);
    assert_eq!(v["result"], "none-up-to");
    let v = json(&["model", "valid", "[]([]p0 -> p0) -> []p0", "--logic", "GL", "--json"]);
    assert_eq!(v["verdict"], "valid");

    let v = json(&["model", "valid", "[]([]p0 -> p0) -> []p0", "--logic", "K", "--json"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, v["model"].to_string()).unwrap();
    let m = path.to_str().unwrap();
    let o = goedel(&["model", "check", "[]([]p0 -> p0) -> []p0", "--logic", "K", "--model", m]);
    assert_eq!(stdout(&o).trim(), "false");
    let o = goedel(&["model", "check", "p0", "--logic", "GL", "--model", m]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(goedel(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        goedel(&["model", "find", "p0", "--max-worlds", "9"]).status.code(),
        Some(2)
    );
    assert_eq!(goedel(&["encode", "Dem("]).status.code(), Some(1));
    let o = goedel(&["diagonalize", "--template", "Dem(S^100000(x0))"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn outputs_are_byte_identical_across_runs_and_caches() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let commands: &[&[&str]] = &[
        &["audit", "canonical", "--json"],
        &["audit", "compare", "--json"],
        &["diagonalize"],
        &["enumerate", "--up-to", "20", "--json"],
        &["model", "schemas", "--json"],
    ];
    for args in commands {
        let plain = goedel(args);
        let mut cached_args = vec!["--cache-dir", cache];
        cached_args.extend_from_slice(args);
        let first = goedel(&cached_args);
        let second = goedel(&cached_args);
        assert!(plain.status.success());
        assert_eq!(plain.stdout, first.stdout, "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
    let file = dir.path().join("index-v1.txt");
    assert!(file.exists());
    std::fs::write(&file, "# goedel-index v1 garbage\n").unwrap();
    let after = goedel(&["--cache-dir", cache, "enumerate", "--up-to", "20", "--json"]);
    assert_eq!(after.stdout, goedel(&["enumerate", "--up-to", "20", "--json"]).stdout);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_goedel"))
        .args(["enumerate", "--up-to", "3"])
        .env("GOEDEL_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("index-v1.txt").exists());
}
