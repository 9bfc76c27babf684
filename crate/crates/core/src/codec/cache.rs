//! On-disk form of an [`IndexTable`].
//!
//! ```text
//! # goedel-index v1 bound=<len:hex> entries=<n> sha256=<hex of body>
//! 0 <len:hex code> <formula>
//! 1 ...
//! ```
//!
//! Loading re-encodes every formula and checks order, unarity and the
//! checksum, so a damaged file is rejected rather than trusted.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigUint;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{encode_formula, IndexTable};
use crate::formula::parse_formula;
use crate::nat::Nat;

const MAGIC: &str = "# goedel-index v1";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache header malformed")]
    Header,
    #[error("cache checksum mismatch")]
    Checksum,
    #[error("cache line {0} invalid")]
    Line(usize),
}

fn body_of(table: &IndexTable) -> String {
    let mut body = String::new();
    for (i, (code, f)) in table.entries.iter().enumerate() {
        let code = Nat::from(code.clone()).to_len_hex();
        body.push_str(&format!("{i} {code} {f}\n"));
    }
    body
}

/// Writes atomically: a sibling temp file is renamed over `path`.
pub fn save_index_table(path: &Path, table: &IndexTable) -> std::io::Result<()> {
    let body = body_of(table);
    let digest = hex::encode(Sha256::digest(body.as_bytes()));
    let bound = Nat::from(table.bound.clone()).to_len_hex();
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut file = fs::File::create(&tmp)?;
        writeln!(
            file,
            "{MAGIC} bound={bound} entries={} sha256={digest}",
            table.entries.len()
        )?;
        file.write_all(body.as_bytes())?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)
}

fn header_field<'a>(header: &'a str, key: &str) -> Option<&'a str> {
    header
        .split_whitespace()
        .find_map(|w| w.strip_prefix(key)?.strip_prefix('='))
}

fn biguint(text: &str) -> Option<BigUint> {
    text.parse::<Nat>().ok()?.as_biguint().cloned()
}

pub fn load_index_table(path: &Path) -> Result<IndexTable, CacheError> {
    let text = fs::read_to_string(path)?;
    let (header, body) = text.split_once('\n').ok_or(CacheError::Header)?;
    if !header.starts_with(MAGIC) {
        return Err(CacheError::Header);
    }
    let bound = header_field(header, "bound")
        .and_then(biguint)
        .ok_or(CacheError::Header)?;
    let count: usize = header_field(header, "entries")
        .and_then(|s| s.parse().ok())
        .ok_or(CacheError::Header)?;
    let digest = header_field(header, "sha256").ok_or(CacheError::Header)?;
    if hex::encode(Sha256::digest(body.as_bytes())) != digest {
        return Err(CacheError::Checksum);
    }
    let mut entries: Vec<(BigUint, _)> = Vec::with_capacity(count);
    for (n, line) in body.lines().enumerate() {
        let bad = || CacheError::Line(n + 2);
        let mut parts = line.splitn(3, ' ');
        let index: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let code = parts.next().and_then(biguint).ok_or_else(bad)?;
        let f = parts.next().and_then(|s| parse_formula(s).ok()).ok_or_else(bad)?;
        let unary = f.free_vars().into_iter().eq([0]);
        let recoded = encode_formula(&f).value().as_biguint() == Some(&code);
        let ordered = entries.last().map_or(true, |(prev, _)| *prev < code);
        if index != n || !unary || !recoded || !ordered || code > bound {
            return Err(bad());
        }
        entries.push((code, f));
    }
    if entries.len() != count {
        return Err(CacheError::Header);
    }
    Ok(IndexTable { bound, entries })
}
