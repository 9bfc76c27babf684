//! Arithmetization of the object language.
//!
//! A formula is written in Polish (prefix) notation over the fixed token
//! table below, and the token string `t_1 … t_k` is coded as
//! `2^{t_1} · 3^{t_2} · … · p_k^{t_k}`. Every token code is at least 1, so a
//! code that skips a prime is detectably not a token string. A proof is the
//! sequence of its step formulas, coded the same way with formula codes as
//! exponents.
//!
//! [`sub_num`] and [`diag_num`] work on codes directly (a token-level walk
//! that never builds a [`Formula`]); [`Formula::substitute`] followed by
//! [`encode_formula`] is the independent symbolic route to the same numbers.

mod cache;
mod enumerate;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::formula::{Formula, Term};
use crate::nat::{Nat, NatError, Run};

pub use cache::{load_index_table, save_index_table, CacheError};
pub use enumerate::{formula_at, index_of, scan_unary, Enumerator, IndexTable, UnaryIndex};

/// One symbol of the object language.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    Not,
    Implies,
    ForAll,
    Eq,
    Dem,
    Sub,
    Diag,
    Zero,
    Succ,
    Var(u32),
}

/// Formulas are rebuilt recursively; longer token strings are refused.
pub const MAX_DECODE_TOKENS: u64 = 10_000;

/// Codes 10–12 are reserved (parentheses and comma) and never emitted.
pub const FIRST_VAR_CODE: u64 = 13;

impl Token {
    pub fn code(self) -> u64 {
        match self {
            Token::Not => 1,
            Token::Implies => 2,
            Token::ForAll => 3,
            Token::Eq => 4,
            Token::Dem => 5,
            Token::Sub => 6,
            Token::Diag => 7,
            Token::Zero => 8,
            Token::Succ => 9,
            Token::Var(i) => FIRST_VAR_CODE + i as u64,
        }
    }

    pub fn from_code(code: u64) -> Option<Token> {
        Some(match code {
            1 => Token::Not,
            2 => Token::Implies,
            3 => Token::ForAll,
            4 => Token::Eq,
            5 => Token::Dem,
            6 => Token::Sub,
            7 => Token::Diag,
            8 => Token::Zero,
            9 => Token::Succ,
            c if c >= FIRST_VAR_CODE => Token::Var(u32::try_from(c - FIRST_VAR_CODE).ok()?),
            _ => return None,
        })
    }
}

/// Why a number is not the code of a formula.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Malformed {
    #[error("empty sequence")]
    EmptySequence,
    #[error("zero is not a sequence code")]
    Zero,
    #[error("prime exponents have a gap")]
    ExponentGap,
    #[error("unknown token code {0}")]
    UnknownToken(String),
    #[error("incomplete Polish string")]
    Incomplete,
    #[error("trailing tokens after a complete formula")]
    Trailing,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("not-well-formed: {0}")]
    NotWellFormed(Malformed),
    #[error("not-unary: free variables {0:?}, expected exactly {{0}}")]
    NotUnary(Vec<u32>),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("index {0} out of domain")]
    IndexOutOfDomain(String),
    #[error(transparent)]
    Nat(#[from] NatError),
}

impl From<Malformed> for CodecError {
    fn from(m: Malformed) -> Self {
        CodecError::NotWellFormed(m)
    }
}

/// A natural number ≥ 1 read as a sequence code.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GoedelNumber(Nat);

impl GoedelNumber {
    pub fn new(value: Nat) -> Result<Self, CodecError> {
        if value.is_zero() {
            Err(Malformed::Zero.into())
        } else {
            Ok(GoedelNumber(value))
        }
    }

    pub fn value(&self) -> &Nat {
        &self.0
    }

    pub fn into_nat(self) -> Nat {
        self.0
    }

    pub fn to_len_hex(&self) -> String {
        self.0.to_len_hex()
    }
}

impl From<u64> for GoedelNumber {
    /// Panics on zero.
    fn from(v: u64) -> Self {
        GoedelNumber::new(Nat::from(v)).expect("Gödel numbers are at least 1")
    }
}

impl fmt::Display for GoedelNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for GoedelNumber {
    type Err = CodecError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GoedelNumber::new(s.parse()?)
    }
}

impl Serialize for GoedelNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// A token repeated `count` times; only successor runs have counts that are
/// not small explicit numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenRun {
    pub token: Token,
    pub count: Nat,
}

/// Polish token string of `f`, successor chains collapsed into runs.
pub fn tokens(f: &Formula) -> Vec<TokenRun> {
    let mut out = Vec::new();
    push_formula(&mut out, f);
    out
}

fn push(out: &mut Vec<TokenRun>, token: Token) {
    out.push(TokenRun {
        token,
        count: Nat::one(),
    });
}

fn push_formula(out: &mut Vec<TokenRun>, f: &Formula) {
    match f {
        Formula::Not(g) => {
            push(out, Token::Not);
            push_formula(out, g);
        }
        Formula::Implies(a, b) => {
            push(out, Token::Implies);
            push_formula(out, a);
            push_formula(out, b);
        }
        Formula::ForAll(v, g) => {
            push(out, Token::ForAll);
            push(out, Token::Var(*v));
            push_formula(out, g);
        }
        Formula::Eq(a, b) => {
            push(out, Token::Eq);
            push_term(out, a);
            push_term(out, b);
        }
        Formula::Dem(t) => {
            push(out, Token::Dem);
            push_term(out, t);
        }
    }
}

fn push_term(out: &mut Vec<TokenRun>, t: &Term) {
    match t {
        Term::Var(i) => push(out, Token::Var(*i)),
        Term::Zero => push(out, Token::Zero),
        Term::Succ(k, inner) => {
            out.push(TokenRun {
                token: Token::Succ,
                count: k.clone(),
            });
            push_term(out, inner);
        }
        Term::Sub(a, b) => {
            push(out, Token::Sub);
            push_term(out, a);
            push_term(out, b);
        }
        Term::Diag(a) => {
            push(out, Token::Diag);
            push_term(out, a);
        }
    }
}

fn code_of_runs(runs: &[TokenRun]) -> Nat {
    Nat::sequence_code(runs.iter().map(|r| Run::new(r.token.code(), r.count.clone()))).expect("token codes are nonzero")
}

/// `∏ p_i^{t_i}` over the Polish token string of `f`.
pub fn encode_formula(f: &Formula) -> GoedelNumber {
    GoedelNumber(code_of_runs(&tokens(f)))
}

/// Splits a code into token runs, checking only the token table.
pub fn token_runs(g: &GoedelNumber) -> Result<Vec<TokenRun>, CodecError> {
    let runs = g.0.runs().ok_or(Malformed::ExponentGap)?;
    runs.into_iter()
        .map(|r| {
            let token = r
                .exponent
                .to_u64()
                .and_then(Token::from_code)
                .ok_or_else(|| Malformed::UnknownToken(r.exponent.to_string()))?;
            Ok(TokenRun { token, count: r.count })
        })
        .collect()
}

/// Reads tokens one at a time from a run list, or a whole successor run.
struct Reader {
    runs: Vec<TokenRun>,
    at: usize,
    used: u64,
}

impl Reader {
    fn new(runs: Vec<TokenRun>) -> Self {
        Reader { runs, at: 0, used: 0 }
    }

    fn done(&self) -> bool {
        self.at == self.runs.len()
    }

    fn peek(&self) -> Option<Token> {
        self.runs.get(self.at).map(|r| r.token)
    }

    /// One token; fails on a run too long to walk one by one.
    fn next(&mut self) -> Result<Token, CodecError> {
        let run = self.runs.get(self.at).ok_or(Malformed::Incomplete)?;
        let count = run
            .count
            .to_u64()
            .ok_or_else(|| CodecError::ResourceBound(format!("run of {:?} tokens is too long", run.token)))?;
        let token = run.token;
        self.used += 1;
        if self.used == count {
            self.at += 1;
            self.used = 0;
        }
        Ok(token)
    }

    /// The rest of the current run as one block.
    fn take_run(&mut self) -> (Token, Nat) {
        let run = &self.runs[self.at];
        let rest = match run.count.to_u64() {
            Some(c) => Nat::from(c - self.used),
            None => run.count.clone(),
        };
        let token = run.token;
        self.at += 1;
        self.used = 0;
        (token, rest)
    }
}

fn read_formula(r: &mut Reader) -> Result<Formula, CodecError> {
    Ok(match r.next()? {
        Token::Not => Formula::not(read_formula(r)?),
        Token::Implies => {
            let a = read_formula(r)?;
            Formula::implies(a, read_formula(r)?)
        }
        Token::ForAll => match r.next()? {
            Token::Var(v) => Formula::forall(v, read_formula(r)?),
            _ => return Err(Malformed::Incomplete.into()),
        },
        Token::Eq => {
            let a = read_term(r)?;
            Formula::eq(a, read_term(r)?)
        }
        Token::Dem => Formula::dem(read_term(r)?),
        _ => return Err(Malformed::Incomplete.into()),
    })
}

fn read_term(r: &mut Reader) -> Result<Term, CodecError> {
    if r.peek() == Some(Token::Succ) {
        let (_, count) = r.take_run();
        return Ok(Term::succ_n(count, read_term(r)?));
    }
    Ok(match r.next()? {
        Token::Var(i) => Term::Var(i),
        Token::Zero => Term::Zero,
        Token::Sub => {
            let a = read_term(r)?;
            Term::sub(a, read_term(r)?)
        }
        Token::Diag => Term::diag(read_term(r)?),
        _ => return Err(Malformed::Incomplete.into()),
    })
}

pub(crate) fn formula_from_runs(runs: Vec<TokenRun>) -> Result<Formula, CodecError> {
    if runs.is_empty() {
        return Err(Malformed::EmptySequence.into());
    }
    let mut reader = Reader::new(runs);
    let f = read_formula(&mut reader)?;
    if !reader.done() {
        return Err(Malformed::Trailing.into());
    }
    Ok(f)
}

/// Inverse of [`encode_formula`] on its image.
pub fn decode_formula(g: &GoedelNumber) -> Result<Formula, CodecError> {
    let runs = token_runs(g)?;
    let mut single_tokens: u64 = 0;
    for r in runs.iter().filter(|r| r.token != Token::Succ) {
        single_tokens = single_tokens.saturating_add(r.count.to_u64().unwrap_or(u64::MAX));
    }
    if single_tokens > MAX_DECODE_TOKENS {
        return Err(CodecError::ResourceBound(format!(
            "more than {MAX_DECODE_TOKENS} non-successor tokens"
        )));
    }
    formula_from_runs(runs)
}

/// `∏ p_i^{g_i}` with `g_i` the code of the i-th formula.
pub fn encode_proof<'a, I>(formulas: I) -> GoedelNumber
where
    I: IntoIterator<Item = &'a Formula>,
{
    let runs = formulas.into_iter().map(|f| Run::single(encode_formula(f).into_nat()));
    GoedelNumber(Nat::sequence_code(runs).expect("formula codes are nonzero"))
}

/// The step formulas of a proof code.
pub fn decode_proof(g: &GoedelNumber) -> Result<Vec<Formula>, CodecError> {
    let runs = g.0.runs().ok_or(Malformed::ExponentGap)?;
    if runs.is_empty() {
        return Err(Malformed::EmptySequence.into());
    }
    let mut out = Vec::new();
    for run in runs {
        let f = decode_formula(&GoedelNumber(run.exponent))?;
        let n = run
            .count
            .to_u64()
            .ok_or_else(|| CodecError::ResourceBound("proof too long".into()))?;
        for _ in 0..n {
            out.push(f.clone());
        }
    }
    Ok(out)
}

enum Need {
    Formula(Vec<u32>),
    Term(Vec<u32>),
    Binder(Vec<u32>),
}

/// Token-level walk of a code: checks well-formedness, collects free
/// variables and replaces free `x{var}` by `S^m(0)` when `replacement` is set.
fn walk_code(g: &GoedelNumber, var: u32, replacement: Option<&Nat>) -> Result<(Vec<TokenRun>, Vec<u32>), CodecError> {
    let runs = token_runs(g)?;
    if runs.is_empty() {
        return Err(Malformed::EmptySequence.into());
    }
    let mut out: Vec<TokenRun> = Vec::with_capacity(runs.len());
    let mut free: Vec<u32> = Vec::new();
    let mut stack = vec![Need::Formula(Vec::new())];
    for run in runs {
        if run.token == Token::Succ {
            match stack.pop() {
                Some(Need::Term(scope)) => stack.push(Need::Term(scope)),
                Some(_) => return Err(Malformed::Incomplete.into()),
                None => return Err(Malformed::Trailing.into()),
            }
            out.push(run);
            continue;
        }
        let count = run
            .count
            .to_u64()
            .filter(|&c| c <= 1 << 24)
            .ok_or_else(|| CodecError::ResourceBound(format!("run of {:?} tokens is too long", run.token)))?;
        for _ in 0..count {
            let need = stack.pop().ok_or(Malformed::Trailing)?;
            let token = run.token;
            match (need, token) {
                (Need::Formula(s), Token::Not) => stack.push(Need::Formula(s)),
                (Need::Formula(s), Token::Implies) => {
                    stack.push(Need::Formula(s.clone()));
                    stack.push(Need::Formula(s));
                }
                (Need::Formula(s), Token::ForAll) => stack.push(Need::Binder(s)),
                (Need::Formula(s), Token::Eq) | (Need::Term(s), Token::Sub) => {
                    stack.push(Need::Term(s.clone()));
                    stack.push(Need::Term(s));
                }
                (Need::Formula(s), Token::Dem) | (Need::Term(s), Token::Diag) => stack.push(Need::Term(s)),
                (Need::Binder(mut s), Token::Var(v)) => {
                    s.push(v);
                    stack.push(Need::Formula(s));
                }
                (Need::Term(_), Token::Zero) => {}
                (Need::Term(s), Token::Var(v)) => {
                    if !s.contains(&v) {
                        if !free.contains(&v) {
                            free.push(v);
                        }
                        if v == var {
                            if let Some(m) = replacement {
                                out.push(TokenRun {
                                    token: Token::Succ,
                                    count: m.clone(),
                                });
                                out.push(TokenRun {
                                    token: Token::Zero,
                                    count: Nat::one(),
                                });
                                continue;
                            }
                        }
                    }
                }
                _ => return Err(Malformed::Incomplete.into()),
            }
            out.push(TokenRun {
                token,
                count: Nat::one(),
            });
        }
    }
    if !stack.is_empty() {
        return Err(Malformed::Incomplete.into());
    }
    free.sort_unstable();
    Ok((out, free))
}

/// Free variables of the formula coded by `g`, computed on the code.
pub fn free_vars_of_code(g: &GoedelNumber) -> Result<Vec<u32>, CodecError> {
    walk_code(g, 0, None).map(|(_, free)| free)
}

/// Code of `f[x{var} := S^m(0)]` computed from the code of `f` alone.
pub fn substitute_code(g: &GoedelNumber, var: u32, m: &Nat) -> Result<GoedelNumber, CodecError> {
    let (runs, _) = walk_code(g, var, Some(m))?;
    Ok(GoedelNumber(code_of_runs(&runs)))
}

/// Code of the n-th unary formula with the numeral `m` put in for `x0`.
pub fn sub_num(n: &Nat, m: &Nat) -> Result<GoedelNumber, CodecError> {
    let index = UnaryIndex::try_from(n)?;
    let code = encode_formula(&formula_at(index)?);
    substitute_code(&code, 0, m)
}

/// `⌜ψ(ḡ)⌝` for the unary formula `ψ` coded by `g`.
pub fn diag_num(g: &GoedelNumber) -> Result<GoedelNumber, CodecError> {
    let (runs, free) = walk_code(g, 0, Some(g.value()))?;
    if free != [0] {
        return Err(CodecError::NotUnary(free));
    }
    Ok(GoedelNumber(code_of_runs(&runs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn token_table_is_injective() {
        for code in 1..200u64 {
            if let Some(t) = Token::from_code(code) {
                assert_eq!(t.code(), code);
            } else {
                assert!((10..=12).contains(&code));
            }
        }
        assert_eq!(Token::from_code(0), None);
    }

    #[test]
    fn worked_constants() {
        // 2^4 * 3^8 * 5^8 = 16 * 6561 * 390625
        assert_eq!(encode_formula(&f("0 = 0")), GoedelNumber::from(16 * 6561 * 390_625));
        assert_eq!(encode_formula(&f("0 = 0")), GoedelNumber::from(41_006_250_000));
        // 2^5 * 3^13 = 32 * 1594323
        assert_eq!(encode_formula(&f("Dem(x0)")), GoedelNumber::from(51_018_336));
        assert_eq!(decode_formula(&GoedelNumber::from(51_018_336)).unwrap(), f("Dem(x0)"));
    }

    #[test]
    fn malformed_codes() {
        let err = |n: u64| decode_formula(&GoedelNumber::from(n)).unwrap_err();
        assert_eq!(err(1), CodecError::NotWellFormed(Malformed::EmptySequence));
        assert_eq!(err(1).to_string(), "not-well-formed: empty sequence");
        assert_eq!(err(2), CodecError::NotWellFormed(Malformed::Incomplete));
        assert_eq!(err(10), CodecError::NotWellFormed(Malformed::ExponentGap));
        assert_eq!(
            err(1 << 11),
            CodecError::NotWellFormed(Malformed::UnknownToken("11".into()))
        );
        // Dem x0 x0
        assert_eq!(
            err(32 * 1_594_323 * 1_220_703_125),
            CodecError::NotWellFormed(Malformed::Trailing)
        );
        assert!(GoedelNumber::new(Nat::zero()).is_err());
    }

    #[test]
    fn proof_codes() {
        let a = f("0 = 0");
        let one = encode_proof([&a]);
        assert_eq!(one.value().runs().unwrap(), vec![Run::single(41_006_250_000u64)]);
        assert!(!one.value().is_explicit());

        let b = f("Dem(x0)");
        let two = encode_proof([&a, &b]);
        let runs = two.value().runs().unwrap();
        assert_eq!(runs[0].exponent, Nat::from(41_006_250_000u64));
        assert_eq!(runs[1].exponent, Nat::from(51_018_336u64));
        assert_eq!(decode_proof(&two).unwrap(), vec![a, b]);
    }

    #[test]
    fn code_walk_matches_symbolic_substitution() {
        let cases = ["Dem(x0)", "forall x0. x0 = x0", "(Dem(x0) -> forall x0. Dem(S(x0)))"];
        for text in cases {
            let phi = f(text);
            let m = Nat::from(3u64);
            let symbolic = encode_formula(&phi.substitute(0, &Term::numeral(m.clone())).unwrap());
            let numeric = substitute_code(&encode_formula(&phi), 0, &m).unwrap();
            assert_eq!(symbolic, numeric, "{text}");
        }
    }

    #[test]
    fn diag_num_of_dem_x0() {
        let g = encode_formula(&f("Dem(x0)"));
        let expected = encode_formula(&Formula::dem(Term::numeral(51_018_336u64)));
        assert_eq!(diag_num(&g).unwrap(), expected);
        assert_eq!(
            diag_num(&GoedelNumber::from(1)),
            Err(CodecError::NotWellFormed(Malformed::EmptySequence))
        );
        assert_eq!(
            diag_num(&encode_formula(&f("0 = 0"))),
            Err(CodecError::NotUnary(vec![]))
        );
    }
}
