//! Exact natural numbers that may be too large to write down.
//!
//! A [`Nat`] is either an explicit big integer or a *sequence code*
//! `∏ p_i^{e_i}` kept in factored, run-length form. Sequence codes whose
//! magnitude is below [`MATERIALIZE_BITS`] are always multiplied out, so each
//! value has exactly one representation and structural equality is numeric
//! equality. Exponents and run lengths are themselves `Nat`s, which is what
//! lets a proof code (exponents are formula codes) or the numeral for a
//! formula's own code stay finite in memory.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::primes;

/// Sequence codes estimated at or below this many bits are materialized.
pub const MATERIALIZE_BITS: u64 = 1 << 20;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Nat(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Explicit(BigUint),
    Coded(Arc<[Run]>),
}

/// `count` consecutive positions of a sequence code, all with the same exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Run {
    pub exponent: Nat,
    pub count: Nat,
}

impl Run {
    pub fn new(exponent: impl Into<Nat>, count: impl Into<Nat>) -> Self {
        Run {
            exponent: exponent.into(),
            count: count.into(),
        }
    }

    pub fn single(exponent: impl Into<Nat>) -> Self {
        Run::new(exponent, 1u64)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NatError {
    #[error("sequence code exponent must be at least 1")]
    ZeroExponent,
    #[error("invalid natural literal {0:?}")]
    Literal(String),
    #[error("hex literal declares {declared} digits but has {actual}")]
    HexLength { declared: usize, actual: usize },
}

impl Nat {
    pub fn zero() -> Self {
        Nat(Repr::Explicit(BigUint::zero()))
    }

    pub fn one() -> Self {
        Nat(Repr::Explicit(BigUint::one()))
    }

    /// Canonical form of an explicit value.
    pub fn from_biguint(value: BigUint) -> Self {
        if value.bits() + 64 < MATERIALIZE_BITS {
            return Nat(Repr::Explicit(value));
        }
        match factor_runs(&value) {
            Some(runs) if !fits(&runs) => Nat(Repr::Coded(runs.into())),
            _ => Nat(Repr::Explicit(value)),
        }
    }

    /// `∏ p_i^{e_i}` for the exponent sequence spelled out by `runs`.
    pub fn sequence_code<I>(runs: I) -> Result<Self, NatError>
    where
        I: IntoIterator<Item = Run>,
    {
        let mut merged: Vec<Run> = Vec::new();
        for run in runs {
            if run.count.is_zero() {
                continue;
            }
            if run.exponent.is_zero() {
                return Err(NatError::ZeroExponent);
            }
            if let Some(last) = merged.last_mut() {
                if last.exponent == run.exponent {
                    if let Some(sum) = last.count.checked_add(&run.count) {
                        last.count = sum;
                        continue;
                    }
                }
            }
            merged.push(run);
        }
        if fits(&merged) {
            Ok(Nat(Repr::Explicit(materialize(&merged))))
        } else {
            Ok(Nat(Repr::Coded(merged.into())))
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Explicit(v) if v.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Explicit(v) if v.is_one())
    }

    /// Whether the value is held as a plain big integer.
    pub fn is_explicit(&self) -> bool {
        matches!(self.0, Repr::Explicit(_))
    }

    pub fn as_biguint(&self) -> Option<&BigUint> {
        match &self.0 {
            Repr::Explicit(v) => Some(v),
            Repr::Coded(_) => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.as_biguint().and_then(|v| v.to_u64())
    }

    pub fn to_usize(&self) -> Option<usize> {
        self.as_biguint().and_then(|v| v.to_usize())
    }

    pub fn checked_add(&self, other: &Nat) -> Option<Nat> {
        match (&self.0, &other.0) {
            (Repr::Explicit(a), Repr::Explicit(b)) => Some(Nat::from_biguint(a + b)),
            _ if self.is_zero() => Some(other.clone()),
            _ if other.is_zero() => Some(self.clone()),
            _ => None,
        }
    }

    pub fn succ(&self) -> Option<Nat> {
        self.checked_add(&Nat::one())
    }

    /// Exponent sequence of a sequence code, or `None` when the value is 0 or
    /// its factorization skips a prime.
    pub fn runs(&self) -> Option<Vec<Run>> {
        match &self.0 {
            Repr::Coded(runs) => Some(runs.to_vec()),
            Repr::Explicit(v) => factor_runs(v),
        }
    }

    /// Numeric comparison; `None` when either side is held in factored form.
    pub fn try_cmp(&self, other: &Nat) -> Option<Ordering> {
        Some(self.as_biguint()?.cmp(other.as_biguint()?))
    }

    /// Estimated `log2` of the value (exact for explicit values up to rounding).
    pub fn log2_estimate(&self) -> f64 {
        match &self.0 {
            Repr::Explicit(v) if v.is_zero() => f64::NEG_INFINITY,
            Repr::Explicit(v) => {
                let bits = v.bits();
                if bits <= 1000 {
                    v.to_f64().map(f64::log2).unwrap_or(bits as f64)
                } else {
                    let shift = bits - 64;
                    let top = (v >> shift).to_f64().unwrap_or(0.0);
                    top.log2() + shift as f64
                }
            }
            Repr::Coded(runs) => estimate_log2(runs),
        }
    }

    /// Length-prefixed hex: `<digits>:<hex>` for explicit values, and the
    /// bracketed run form (with the same encoding inside) otherwise.
    pub fn to_len_hex(&self) -> String {
        match &self.0 {
            Repr::Explicit(v) => {
                let hex = v.to_str_radix(16);
                format!("{}:{}", hex.len(), hex)
            }
            Repr::Coded(runs) => format_runs(runs, &|n: &Nat| n.to_len_hex()),
        }
    }
}

fn format_runs(runs: &[Run], leaf: &dyn Fn(&Nat) -> String) -> String {
    let parts: Vec<String> = runs
        .iter()
        .map(|r| {
            if r.count.is_one() {
                leaf(&r.exponent)
            } else {
                format!("{}^{}", leaf(&r.exponent), leaf(&r.count))
            }
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

fn fits(runs: &[Run]) -> bool {
    let mut positions: u64 = 0;
    for r in runs {
        if !r.exponent.is_explicit() {
            return false;
        }
        match r.count.to_u64() {
            Some(c) => positions = positions.saturating_add(c),
            None => return false,
        }
        // every position contributes at least one bit
        if positions > MATERIALIZE_BITS {
            return false;
        }
    }
    estimate_log2(runs) <= MATERIALIZE_BITS as f64
}

fn estimate_log2(runs: &[Run]) -> f64 {
    let mut total = 0.0;
    let mut position: u64 = 0;
    for r in runs {
        let e = r.exponent.log2_estimate().exp2();
        match r.count.to_u64() {
            Some(c) if position.saturating_add(c) <= MATERIALIZE_BITS + 1 => {
                let (start, end) = (position as usize, (position + c) as usize);
                let sum: f64 = primes::with_first(end, |ps| ps[start..end].iter().map(|&p| (p as f64).log2()).sum());
                total += e * sum;
                position += c;
            }
            _ => return f64::INFINITY,
        }
        if total > MATERIALIZE_BITS as f64 {
            return f64::INFINITY;
        }
    }
    total
}

fn materialize(runs: &[Run]) -> BigUint {
    let mut factors = Vec::new();
    let mut position = 0usize;
    for r in runs {
        let e = r.exponent.to_u64().expect("fits() checked exponent size") as u32;
        let c = r.count.to_usize().expect("fits() checked run length");
        for i in position..position + c {
            factors.push(BigUint::from(primes::nth(i)).pow(e));
        }
        position += c;
    }
    product(&factors)
}

fn product(factors: &[BigUint]) -> BigUint {
    match factors.len() {
        0 => BigUint::one(),
        1 => factors[0].clone(),
        n => product(&factors[..n / 2]) * product(&factors[n / 2..]),
    }
}

fn factor_runs(value: &BigUint) -> Option<Vec<Run>> {
    if value.is_zero() {
        return None;
    }
    let mut n = value.clone();
    let mut runs: Vec<Run> = Vec::new();
    let mut index = 0usize;
    while !n.is_one() {
        let e = strip_prime(&mut n, primes::nth(index));
        if e == 0 {
            return None;
        }
        match runs.last_mut() {
            Some(last) if last.exponent.to_u64() == Some(e) => {
                let c = last.count.to_u64().expect("run counts from factoring are small");
                last.count = Nat::from(c + 1);
            }
            _ => runs.push(Run::single(e)),
        }
        index += 1;
    }
    Some(runs)
}

/// Divides out every factor `p` and returns the multiplicity. Small
/// multiplicities go through single-word divisions by the largest power of
/// `p` below 2^64; large ones switch to `p^(2^k)` chunks so they cost
/// O(log e) divisions.
fn strip_prime(n: &mut BigUint, p: u64) -> u64 {
    if p == 2 {
        let e = n.trailing_zeros().unwrap_or(0);
        *n >>= e;
        return e;
    }
    if !(&*n % p).is_zero() {
        return 0;
    }
    let (mut word, mut k) = (p, 1u64);
    while let Some(next) = word.checked_mul(p) {
        word = next;
        k += 1;
    }
    let mut e = 0u64;
    for _ in 0..16 {
        if !(&*n % word).is_zero() {
            break;
        }
        *n /= word;
        e += k;
    }
    if (&*n % word).is_zero() {
        e += strip_by_squaring(n, p);
    }
    while (&*n % p).is_zero() {
        *n /= p;
        e += 1;
    }
    e
}

fn strip_by_squaring(n: &mut BigUint, p: u64) -> u64 {
    let mut powers = vec![BigUint::from(p)];
    loop {
        let last = powers.last().expect("nonempty");
        if last.bits() * 2 > n.bits() + 1 {
            break;
        }
        let sq = last * last;
        if !(&*n % &sq).is_zero() {
            break;
        }
        powers.push(sq);
    }
    let mut e = 0u64;
    for (k, pw) in powers.iter().enumerate().rev() {
        while (&*n % pw).is_zero() {
            *n /= pw;
            e += 1 << k;
        }
    }
    e
}

impl From<u64> for Nat {
    fn from(v: u64) -> Self {
        Nat(Repr::Explicit(BigUint::from(v)))
    }
}

impl From<u32> for Nat {
    fn from(v: u32) -> Self {
        Nat::from(v as u64)
    }
}

impl From<usize> for Nat {
    fn from(v: usize) -> Self {
        Nat::from(v as u64)
    }
}

impl From<BigUint> for Nat {
    fn from(v: BigUint) -> Self {
        Nat::from_biguint(v)
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Explicit(v) => write!(f, "{v}"),
            Repr::Coded(runs) => f.write_str(&format_runs(runs, &|n: &Nat| n.to_string())),
        }
    }
}

impl fmt::Debug for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Nat {
    type Err = NatError;

    /// Accepts decimal, `0x<hex>`, `<len>:<hex>` and `[e, e^c, ...]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || NatError::Literal(s.to_string());
        if let Some(inner) = s.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(bad)?;
            let mut runs = Vec::new();
            for item in split_top_level(inner).ok_or_else(bad)? {
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                let (e, c): (Nat, Nat) = match split_caret(item) {
                    Some((e, c)) => (e.parse()?, c.parse()?),
                    None => (item.parse()?, Nat::one()),
                };
                runs.push(Run::new(e, c));
            }
            return Nat::sequence_code(runs);
        }
        if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            return parse_radix(hex, 16).ok_or_else(bad);
        }
        if let Some((len, hex)) = s.split_once(':') {
            let declared: usize = len.parse().map_err(|_| bad())?;
            if declared != hex.len() {
                return Err(NatError::HexLength {
                    declared,
                    actual: hex.len(),
                });
            }
            return parse_radix(hex, 16).ok_or_else(bad);
        }
        parse_radix(s, 10).ok_or_else(bad)
    }
}

fn parse_radix(digits: &str, radix: u32) -> Option<Nat> {
    if digits.is_empty() || !digits.chars().all(|c| c.is_digit(radix)) {
        return None;
    }
    BigUint::parse_bytes(digits.as_bytes(), radix).map(Nat::from_biguint)
}

fn split_top_level(s: &str) -> Option<Vec<&str>> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut parts = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return None;
        }
    }
    (depth == 0).then(|| {
        parts.push(&s[start..]);
        parts
    })
}

/// Splits `e^c` at the last top-level caret.
fn split_caret(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    let mut found = None;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            '^' if depth == 0 => found = Some(i),
            _ => {}
        }
    }
    found.map(|i| (&s[..i], &s[i + 1..]))
}

impl Serialize for Nat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_len_hex())
    }
}

impl<'de> Deserialize<'de> for Nat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(exps: &[u64]) -> Nat {
        Nat::sequence_code(exps.iter().map(|&e| Run::single(e))).unwrap()
    }

    #[test]
    fn small_sequence_codes_materialize() {
        assert_eq!(seq(&[4, 8, 8]), Nat::from(41_006_250_000u64));
        assert_eq!(seq(&[5, 13]), Nat::from(51_018_336u64));
        assert_eq!(seq(&[]), Nat::one());
    }

    #[test]
    fn factoring_inverts_sequence_code() {
        let n = Nat::from(41_006_250_000u64);
        assert_eq!(n.runs().unwrap(), vec![Run::single(4u64), Run::new(8u64, 2u64)]);
        assert_eq!(Nat::one().runs().unwrap(), vec![]);
        // 2^1 * 5^1 skips 3
        assert_eq!(Nat::from(10u64).runs(), None);
        assert_eq!(Nat::zero().runs(), None);
    }

    #[test]
    fn huge_runs_stay_factored_and_compare_structurally() {
        let a = Nat::sequence_code([Run::single(5u64), Run::new(9u64, 51_018_336u64), Run::single(8u64)]).unwrap();
        assert!(!a.is_explicit());
        let b = Nat::sequence_code([
            Run::single(5u64),
            Run::new(9u64, 51_018_000u64),
            Run::new(9u64, 336u64),
            Run::single(8u64),
        ])
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "[5, 9^51018336, 8]");
        assert_eq!(a.to_string().parse::<Nat>().unwrap(), a);
    }

    #[test]
    fn explicit_input_above_limit_is_canonicalized() {
        // 2^(2^21) is a one-position sequence code well above the limit
        let exponent = 1u64 << 21;
        let coded = Nat::sequence_code([Run::single(exponent)]).unwrap();
        assert!(!coded.is_explicit());
        let explicit = Nat::from_biguint(BigUint::one() << exponent);
        assert_eq!(coded, explicit);
    }

    #[test]
    fn literal_forms() {
        let n = Nat::from(41_006_250_000u64);
        assert_eq!("41006250000".parse::<Nat>().unwrap(), n);
        assert_eq!("0x98c29b810".parse::<Nat>().unwrap(), n);
        assert_eq!(n.to_len_hex(), "9:98c29b810");
        assert_eq!(n.to_len_hex().parse::<Nat>().unwrap(), n);
        assert_eq!("[4, 8^2]".parse::<Nat>().unwrap(), n);
        assert!(matches!("3:ff".parse::<Nat>(), Err(NatError::HexLength { .. })));
        assert!("12a".parse::<Nat>().is_err());
        assert_eq!("[0]".parse::<Nat>(), Err(NatError::ZeroExponent));
    }

    #[test]
    fn addition_only_on_explicit_values() {
        let big = Nat::sequence_code([Run::single(1u64 << 21)]).unwrap();
        assert_eq!(Nat::from(2u64).checked_add(&Nat::from(3u64)), Some(Nat::from(5u64)));
        assert_eq!(big.checked_add(&Nat::zero()), Some(big.clone()));
        assert_eq!(big.checked_add(&Nat::one()), None);
    }
}
