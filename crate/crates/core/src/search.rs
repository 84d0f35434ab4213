//! Exhaustive search for numerators minimising `S(a/N)` or `M(a/N)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{coprime_residues_in, prime_factors};
use crate::ensemble::TWELVE_OVER_PI_SQ;
use crate::error::{Error, Result};

/// Largest `N` searched exhaustively.
pub const SEARCH_LIMIT: u64 = 10_000_000;

const CHUNK: u64 = 1 << 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MinStat {
    S,
    M,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalRecord {
    pub n: u64,
    pub stat: MinStat,
    /// Smallest `a` attaining the minimum.
    pub argmin: u64,
    pub min_value: u64,
    /// `(12/π²) ln N ln ln N` for S, `3 ln N` for M.
    pub bound_value: f64,
    pub bound_satisfied: bool,
    /// `(min − (12/π²) ln N ln ln N)/ln N` for S, `(min − (12/π²) ln N)/ln N` for M.
    pub margin: f64,
}

fn stat_of(stat: MinStat, a: u64, n: u64) -> u64 {
    let (mut x, mut y) = (a, n);
    let mut acc = 0;
    while x != 0 {
        let d = y / x;
        (x, y) = (y - d * x, x);
        acc = match stat {
            MinStat::S => acc + d,
            MinStat::M => acc.max(d),
        };
    }
    acc
}

fn check(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::BadRange(format!("need N >= 2, got {n}")));
    }
    if n > SEARCH_LIMIT {
        return Err(Error::NotSupported(format!("exhaustive search limited to N <= {SEARCH_LIMIT}")));
    }
    Ok(())
}

/// `(min, argmin)` over `ℤ_N*`, ties going to the smallest `a`.
fn minimum(stat: MinStat, n: u64) -> (u64, u64) {
    let primes = prime_factors(n);
    let chunks = (n - 1).div_ceil(CHUNK);
    let best = |c: u64| {
        let lo = 1 + c * CHUNK;
        let hi = (lo + CHUNK - 1).min(n - 1);
        coprime_residues_in(lo, hi, &primes)
            .map(|a| (stat_of(stat, a, n), a))
            .min()
            .unwrap_or((u64::MAX, u64::MAX))
    };
    if n < 4 * CHUNK {
        (0..chunks).map(best).min().expect("N >= 2")
    } else {
        (0..chunks).into_par_iter().map(best).min().expect("N >= 2")
    }
}

fn record(stat: MinStat, n: u64) -> Result<ExtremalRecord> {
    check(n)?;
    let (min_value, argmin) = minimum(stat, n);
    let ln_n = (n as f64).ln();
    let (bound_value, reference) = match stat {
        MinStat::S => {
            let b = TWELVE_OVER_PI_SQ * ln_n * ln_n.ln();
            (b, b)
        }
        MinStat::M => (3.0 * ln_n, TWELVE_OVER_PI_SQ * ln_n),
    };
    Ok(ExtremalRecord {
        n,
        stat,
        argmin,
        min_value,
        bound_value,
        bound_satisfied: min_value as f64 <= bound_value,
        margin: (min_value as f64 - reference) / ln_n,
    })
}

/// Minimum of `S(a/N)` over `ℤ_N*`. The comparison with
/// `(12/π²) ln N ln ln N` is reported, not enforced.
pub fn min_sum(n: u64) -> Result<ExtremalRecord> {
    record(MinStat::S, n)
}

/// Minimum of `M(a/N)` over `ℤ_N*`, compared with `3 ln N`.
pub fn min_max_quotient(n: u64) -> Result<ExtremalRecord> {
    record(MinStat::M, n)
}

/// True when some `a ∈ ℤ_N*` has every partial quotient `≤ k`.
fn has_bounded(n: u64, k: u64) -> bool {
    let primes = prime_factors(n);
    let found = coprime_residues_in(1, n - 1, &primes).any(|a| {
        let (mut x, mut y) = (a, n);
        while x != 0 {
            let d = y / x;
            if d > k {
                return false;
            }
            (x, y) = (y - d * x, x);
        }
        true
    });
    found
}

/// Every `N` in `[lo, hi]` whose fractions all have a partial quotient above `k`.
pub fn zaremba_scan(lo: u64, hi: u64, k: u64) -> Result<Vec<u64>> {
    if lo < 2 || lo > hi {
        return Err(Error::BadRange(format!("need 2 <= lo <= hi, got [{lo}, {hi}]")));
    }
    check(hi)?;
    Ok((lo..=hi).into_par_iter().filter(|&n| !has_bounded(n, k)).collect())
}
