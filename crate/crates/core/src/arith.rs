//! Small integer helpers: gcd, Euler's totient, coprime residues.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Distinct prime factors of `n` in increasing order, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for p in [2u64, 3] {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
    }
    // 6k ± 1 wheel
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        for p in [d, d + 2] {
            if n.is_multiple_of(p) {
                out.push(p);
                while n.is_multiple_of(p) {
                    n /= p;
                }
            }
        }
        d += 6;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Euler's totient φ(n). φ(1) = 1.
pub fn totient(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// Numerators `1 ≤ a ≤ n` with gcd(a, n) = 1, ascending. For `n = 1` this
/// yields `1`, matching ℤ_1* = {1}.
pub fn coprime_residues(n: u64) -> impl Iterator<Item = u64> {
    let primes = prime_factors(n);
    let hi = if n == 1 { 1 } else { n - 1 };
    (1..=hi).filter(move |a| primes.iter().all(|p| a % p != 0))
}

/// Coprime numerators in `[lo, hi]` (inclusive), ascending, given the
/// distinct prime factors of the modulus.
pub fn coprime_residues_in(lo: u64, hi: u64, primes: &[u64]) -> impl Iterator<Item = u64> + '_ {
    (lo..=hi).filter(move |a| primes.iter().all(|p| a % p != 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn totient_brute(n: u64) -> u64 {
        (1..=n).filter(|&a| gcd(a, n) == 1).count() as u64
    }

    #[test]
    fn totient_matches_brute_force() {
        for n in 1..=2000 {
            assert_eq!(totient(n), totient_brute(n), "n = {n}");
        }
    }

    #[test]
    fn factors_of_large_prime_and_composites() {
        assert_eq!(prime_factors(1_000_003), vec![1_000_003]);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(prime_factors((1 << 61) - 1), vec![(1 << 61) - 1]);
        assert_eq!(totient(1_000_003), 1_000_002);
    }

    #[test]
    fn residues() {
        assert_eq!(coprime_residues(6).collect::<Vec<_>>(), vec![1, 5]);
        assert_eq!(coprime_residues(12).collect::<Vec<_>>(), vec![1, 5, 7, 11]);
        assert_eq!(coprime_residues(1).collect::<Vec<_>>(), vec![1]);
        assert_eq!(coprime_residues(7).count(), 6);
    }
}
