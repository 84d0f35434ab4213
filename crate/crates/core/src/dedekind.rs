//! Dedekind sums `D(a/N) = Σ_{b=1}^{N-1} (b/N - 1/2)({ba/N} - 1/2)`.

use crate::arith::gcd;
use crate::cf::{expand, ContinuedFraction, ReducedFraction};
use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// Largest denominator accepted by [`dedekind_direct`].
pub const DIRECT_LIMIT: u64 = 1_000_000;

/// Dedekind sum straight from the definition, O(N).
pub fn dedekind_direct(frac: ReducedFraction) -> Result<ExactRational> {
    let n = frac.denominator();
    if n > DIRECT_LIMIT {
        return Err(Error::NotSupported(format!(
            "direct Dedekind sum limited to N <= {DIRECT_LIMIT}, got {n}"
        )));
    }
    let (a, n) = (frac.numerator() as i128, n as i128);
    // (b/N - 1/2)(r/N - 1/2) = (2b - N)(2r - N) / (4N²)
    let total: i128 = (1..n).map(|b| (2 * b - n) * (2 * (b * a % n) - n)).sum();
    Ok(ExactRational::new(total, 4 * n * n))
}

/// `12 N · D(a/N)`, which is always an integer, from the expansion.
pub fn scaled_from_expansion(cf: &ContinuedFraction) -> i128 {
    let frac = cf.fraction();
    let (a, n) = (frac.numerator() as i128, frac.denominator() as i128);
    let r = cf.len() as isize;
    let sign: i128 = if r % 2 == 0 { 1 } else { -1 };
    // 12N((-1)^r - 1)/8 is 0 or -3N
    let head = if sign == 1 { 0 } else { -3 * n };
    head + a - sign * cf.q(r - 1) - n * cf.alt()
}

/// Dedekind sum via the Barkan–Hickerson identity
/// `D = ((-1)^r - 1)/8 + (a/N - (-1)^r q_{r-1}/N - S_alt)/12`, O(log N).
pub fn dedekind_bh(frac: ReducedFraction) -> ExactRational {
    let cf = expand(frac);
    ExactRational::new(scaled_from_expansion(&cf), 12 * frac.denominator() as i128)
}

/// `s(a, b)`: the Dedekind sum of `(a mod b)/b`.
fn classical(a: u64, b: u64) -> ExactRational {
    dedekind_bh(ReducedFraction::new_unchecked(a % b, b))
}

/// Reciprocity `s(a,b) + s(b,a) = -1/4 + (a² + b² + 1)/(12ab)`.
pub fn reciprocity_check(a: u64, b: u64) -> Result<bool> {
    if a < 2 || b < 2 {
        return Err(Error::BadRange(format!("need a, b >= 2, got ({a}, {b})")));
    }
    if gcd(a, b) != 1 {
        return Err(Error::NotCoprime(a, b));
    }
    let lhs = classical(a, b) + classical(b, a);
    let (a, b) = (a as i128, b as i128);
    let rhs = ExactRational::new(-1, 4) + ExactRational::new(a * a + b * b + 1, 12 * a * b);
    Ok(lhs == rhs)
}
