//! Process-wide table of the first primes, grown on demand.
//!
//! Sequence coding addresses positions by prime, so almost every codec call
//! needs `p_0 = 2, p_1 = 3, ...`. The table only ever grows and its contents
//! are fully determined by its length.

use std::sync::{OnceLock, RwLock};

fn table() -> &'static RwLock<Vec<u64>> {
    static TABLE: OnceLock<RwLock<Vec<u64>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(sieve(1 << 12)))
}

fn sieve(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for n in 2..=limit {
        if !composite[n] {
            out.push(n as u64);
            let mut m = n * n;
            while m <= limit {
                composite[m] = true;
                m += n;
            }
        }
    }
    out
}

/// Upper bound on the `n`-th prime (1-based), Rosser's bound for n ≥ 6.
fn nth_prime_upper_bound(n: usize) -> usize {
    if n < 6 {
        return 15;
    }
    let n = n as f64;
    (n * (n.ln() + n.ln().ln())).ceil() as usize + 1
}

fn ensure(count: usize) {
    if table().read().expect("prime table poisoned").len() >= count {
        return;
    }
    let mut guard = table().write().expect("prime table poisoned");
    if guard.len() < count {
        *guard = sieve(nth_prime_upper_bound(count));
    }
}

/// The `index`-th prime, zero-based (`nth(0) == 2`).
pub fn nth(index: usize) -> u64 {
    ensure(index + 1);
    table().read().expect("prime table poisoned")[index]
}

/// Runs `f` over a slice holding at least the first `count` primes.
pub fn with_first<R>(count: usize, f: impl FnOnce(&[u64]) -> R) -> R {
    ensure(count);
    let guard = table().read().expect("prime table poisoned");
    f(&guard[..count])
}
