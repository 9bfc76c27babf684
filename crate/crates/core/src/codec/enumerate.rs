//! Ascending enumeration of unary formulas (free variables exactly `{x0}`).
//!
//! The scan walks Polish token strings depth-first with an exact big-integer
//! running product, so only prefixes that can still complete below the bound
//! are visited. The result is memoized in an [`IndexTable`] that covers every
//! unary formula whose code is at most the table's bound.

use std::path::{Path, PathBuf};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::One;

use super::{encode_formula, formula_from_runs, load_index_table, save_index_table, CodecError, Token, TokenRun};
use crate::formula::Formula;
use crate::nat::Nat;
use crate::primes;

/// Position in the ascending enumeration of unary formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct UnaryIndex(pub u64);

impl TryFrom<&Nat> for UnaryIndex {
    type Error = CodecError;
    fn try_from(n: &Nat) -> Result<Self, Self::Error> {
        n.to_u64()
            .map(UnaryIndex)
            .ok_or_else(|| CodecError::IndexOutOfDomain(n.to_string()))
    }
}

impl From<u64> for UnaryIndex {
    fn from(v: u64) -> Self {
        UnaryIndex(v)
    }
}

impl std::fmt::Display for UnaryIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// All unary formulas with code `<= bound`, ascending by code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexTable {
    pub bound: BigUint,
    pub entries: Vec<(BigUint, Formula)>,
}

impl IndexTable {
    pub fn empty() -> Self {
        IndexTable {
            bound: BigUint::from(0u32),
            entries: Vec::new(),
        }
    }

    pub fn build(bound: BigUint, limit: usize) -> Result<Self, CodecError> {
        let entries = scan_unary(&bound, limit)?;
        Ok(IndexTable { bound, entries })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Formula,
    Term,
    Binder,
}

struct Scan<'a> {
    bound: &'a BigUint,
    limit: usize,
    prime_powers: Vec<BigUint>,
    tokens: Vec<Token>,
    found: Vec<(BigUint, Vec<Token>)>,
}

impl Scan<'_> {
    fn prime(&mut self, i: usize) -> &BigUint {
        while self.prime_powers.len() <= i {
            let p = primes::nth(self.prime_powers.len());
            self.prime_powers.push(BigUint::from(p));
        }
        &self.prime_powers[i]
    }

    /// Smallest product any completion of `pending` slots from `pos` adds.
    fn min_tail(&mut self, pos: usize, pending: usize) -> BigUint {
        let mut out = BigUint::one();
        for i in pos..pos + pending {
            out *= self.prime(i);
        }
        out
    }

    fn dfs(&mut self, product: &BigUint, stack: &[(Slot, Vec<u32>)], saw_x0: bool) -> Result<(), CodecError> {
        let pos = self.tokens.len();
        let Some(((slot, scope), rest)) = stack.split_last() else {
            if saw_x0 {
                if self.found.len() >= self.limit {
                    return Err(CodecError::ResourceBound(format!(
                        "enumeration exceeds {} unary formulas",
                        self.limit
                    )));
                }
                self.found.push((product.clone(), self.tokens.clone()));
            }
            return Ok(());
        };
        let p = self.prime(pos).clone();
        let fixed: &[Token] = match slot {
            Slot::Formula => &[Token::Not, Token::Implies, Token::ForAll, Token::Eq, Token::Dem],
            Slot::Term => &[Token::Sub, Token::Diag, Token::Zero, Token::Succ],
            Slot::Binder => &[],
        };
        let mut power = BigUint::one();
        let mut exponent = 0u64;
        let candidates = fixed.iter().copied().chain((0u32..).map(Token::Var));
        for token in candidates {
            let code = token.code();
            while exponent < code {
                power *= &p;
                exponent += 1;
            }
            let next = product * &power;
            if &next > self.bound {
                // codes only grow along the candidate list
                break;
            }
            let mut pushed: Vec<(Slot, Vec<u32>)> = rest.to_vec();
            let mut x0 = saw_x0;
            match (slot, token) {
                (Slot::Formula, Token::Not) => pushed.push((Slot::Formula, scope.clone())),
                (Slot::Formula, Token::Implies) => {
                    pushed.push((Slot::Formula, scope.clone()));
                    pushed.push((Slot::Formula, scope.clone()));
                }
                (Slot::Formula, Token::ForAll) => pushed.push((Slot::Binder, scope.clone())),
                (Slot::Formula, Token::Eq) | (Slot::Term, Token::Sub) => {
                    pushed.push((Slot::Term, scope.clone()));
                    pushed.push((Slot::Term, scope.clone()));
                }
                (Slot::Formula, Token::Dem) | (Slot::Term, Token::Diag | Token::Succ) => {
                    pushed.push((Slot::Term, scope.clone()))
                }
                (Slot::Term, Token::Zero) => {}
                (Slot::Term, Token::Var(v)) => {
                    if !scope.contains(&v) {
                        if v != 0 {
                            continue;
                        }
                        x0 = true;
                    }
                }
                (Slot::Binder, Token::Var(v)) => {
                    let mut s = scope.clone();
                    s.push(v);
                    pushed.push((Slot::Formula, s));
                }
                (Slot::Formula, Token::Var(_)) => break,
                _ => continue,
            }
            let tail = self.min_tail(pos + 1, pushed.len());
            if &(&next * tail) > self.bound {
                continue;
            }
            self.tokens.push(token);
            self.dfs(&next, &pushed, x0)?;
            self.tokens.pop();
        }
        Ok(())
    }
}

/// Every formula with free variables exactly `{x0}` and code `<= bound`,
/// ascending by code. Fails once more than `limit` formulas qualify.
pub fn scan_unary(bound: &BigUint, limit: usize) -> Result<Vec<(BigUint, Formula)>, CodecError> {
    let mut scan = Scan {
        bound,
        limit,
        prime_powers: Vec::new(),
        tokens: Vec::new(),
        found: Vec::new(),
    };
    scan.dfs(&BigUint::one(), &[(Slot::Formula, Vec::new())], false)?;
    let mut out: Vec<(BigUint, Formula)> = scan
        .found
        .into_iter()
        .map(|(code, toks)| {
            let runs = toks
                .into_iter()
                .map(|token| TokenRun {
                    token,
                    count: Nat::one(),
                })
                .collect();
            let f = formula_from_runs(runs).expect("scan emits complete Polish strings");
            (code, f)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Memoized enumeration; a single writer extends the table, readers share it.
pub struct Enumerator {
    table: RwLock<IndexTable>,
    cache_file: RwLock<Option<PathBuf>>,
    dirty: RwLock<bool>,
    limit: usize,
}

/// Default ceiling on the number of unary formulas a scan may produce.
pub const DEFAULT_SCAN_LIMIT: usize = 2_000_000;

const INITIAL_BOUND_BITS: u64 = 64;
const GROWTH_BITS: u64 = 16;

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator::new()
    }
}

impl Enumerator {
    pub fn new() -> Self {
        Enumerator::with_limit(DEFAULT_SCAN_LIMIT)
    }

    pub fn with_limit(limit: usize) -> Self {
        Enumerator {
            table: RwLock::new(IndexTable::empty()),
            cache_file: RwLock::new(None),
            dirty: RwLock::new(false),
            limit,
        }
    }

    /// The process-wide enumerator used by the free functions.
    pub fn global() -> &'static Enumerator {
        static GLOBAL: OnceLock<Enumerator> = OnceLock::new();
        GLOBAL.get_or_init(Enumerator::new)
    }

    /// Uses `path` as the persisted table. A valid file covering a larger
    /// bound replaces the in-memory table; an invalid one is ignored and
    /// overwritten on the next [`Enumerator::persist`].
    pub fn attach_cache_file(&self, path: &Path) {
        if let Ok(loaded) = load_index_table(path) {
            let mut table = self.table.write().expect("index table poisoned");
            if loaded.bound > table.bound {
                *table = loaded;
            }
        } else {
            *self.dirty.write().expect("poisoned") = true;
        }
        *self.cache_file.write().expect("poisoned") = Some(path.to_path_buf());
    }

    /// Writes the table to the attached cache file if it changed.
    pub fn persist(&self) -> std::io::Result<()> {
        let path = self.cache_file.read().expect("poisoned").clone();
        let mut dirty = self.dirty.write().expect("poisoned");
        if let (Some(path), true) = (path, *dirty) {
            save_index_table(&path, &self.table.read().expect("index table poisoned"))?;
            *dirty = false;
        }
        Ok(())
    }

    pub fn snapshot(&self) -> IndexTable {
        self.table.read().expect("index table poisoned").clone()
    }

    fn extend_to(&self, bound: BigUint) -> Result<(), CodecError> {
        let mut table = self.table.write().expect("index table poisoned");
        if table.bound >= bound {
            return Ok(());
        }
        *table = IndexTable::build(bound, self.limit)?;
        *self.dirty.write().expect("poisoned") = true;
        Ok(())
    }

    fn ensure_count(&self, count: usize) -> Result<(), CodecError> {
        loop {
            let bound = {
                let table = self.table.read().expect("index table poisoned");
                if table.entries.len() >= count {
                    return Ok(());
                }
                if table.bound.bits() < INITIAL_BOUND_BITS {
                    BigUint::one() << INITIAL_BOUND_BITS
                } else {
                    &table.bound << GROWTH_BITS
                }
            };
            self.extend_to(bound)?;
        }
    }

    /// The first `count` unary formulas with their codes.
    pub fn first(&self, count: usize) -> Result<Vec<(BigUint, Formula)>, CodecError> {
        self.ensure_count(count)?;
        let table = self.table.read().expect("index table poisoned");
        Ok(table.entries[..count].to_vec())
    }

    pub fn formula_at(&self, n: UnaryIndex) -> Result<Formula, CodecError> {
        let i = usize::try_from(n.0).map_err(|_| CodecError::IndexOutOfDomain(n.to_string()))?;
        self.ensure_count(i + 1)?;
        Ok(self.table.read().expect("index table poisoned").entries[i].1.clone())
    }

    pub fn index_of(&self, f: &Formula) -> Result<UnaryIndex, CodecError> {
        let free: Vec<u32> = f.free_vars().into_iter().collect();
        if free != [0] {
            return Err(CodecError::NotUnary(free));
        }
        let code = encode_formula(f);
        let code = code
            .value()
            .as_biguint()
            .cloned()
            .ok_or_else(|| CodecError::ResourceBound("formula code too large to enumerate below".into()))?;
        self.extend_to(code.clone())?;
        let table = self.table.read().expect("index table poisoned");
        let i = table
            .entries
            .binary_search_by(|(c, _)| c.cmp(&code))
            .expect("a unary formula below the bound is in the table");
        Ok(UnaryIndex(i as u64))
    }
}

/// The `n`-th unary formula of the global enumeration.
pub fn formula_at(n: UnaryIndex) -> Result<Formula, CodecError> {
    Enumerator::global().formula_at(n)
}

/// Position of `f` in the global enumeration.
pub fn index_of(f: &Formula) -> Result<UnaryIndex, CodecError> {
    Enumerator::global().index_of(f)
}
