//! Reflection bijections `a ↦ a*` on the two halves of ℤ_N*.
//!
//! Lower half (`a ≤ N/2`, so `a_1 ≥ 2`): `a*/N = [0; a_r, ..., a_1]`.
//! Upper half (`a > N/2`, so `a_1 = 1`): `a*/N = [0; 1, a_r - 1, a_{r-1}, ..., a_3, a_2 + 1]`,
//! obtained by reversing the non-canonical list `(1, a_2, ..., a_{r-1}, a_r - 1, 1)`
//! and merging the trailing 1 into its predecessor. For `r = 2` this gives `a* = a`.

use serde::Serialize;

use crate::cf::{evaluate_digits, expand, ContinuedFraction, ReducedFraction};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Half {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReflectionRecord {
    pub source: ReducedFraction,
    pub image: ReducedFraction,
    pub half: Half,
}

fn from_digit_list(digits: &[u64], n: u64) -> ReducedFraction {
    let (p, q) = evaluate_digits(digits);
    debug_assert_eq!(q, n as i128, "reflection must preserve the denominator");
    ReducedFraction::new_unchecked(p as u64, q as u64)
}

pub fn reflect_lower(frac: ReducedFraction) -> Result<ReducedFraction> {
    if !frac.is_lower_half() {
        return Err(Error::WrongHalf {
            a: frac.numerator(),
            n: frac.denominator(),
            expected: "lower",
        });
    }
    let mut digits: Vec<u64> = frac.digits().collect();
    digits.reverse();
    Ok(from_digit_list(&digits, frac.denominator()))
}

pub fn reflect_upper(frac: ReducedFraction) -> Result<ReducedFraction> {
    if frac.is_lower_half() {
        return Err(Error::WrongHalf {
            a: frac.numerator(),
            n: frac.denominator(),
            expected: "upper",
        });
    }
    let mut digits: Vec<u64> = frac.digits().collect();
    debug_assert!(digits.len() >= 2 && digits[0] == 1);
    // (1, a_2, ..., a_r) -> (1, a_2, ..., a_r - 1, 1)
    *digits.last_mut().expect("r >= 2") -= 1;
    digits.push(1);
    digits.reverse();
    // merge the trailing 1
    digits.pop();
    *digits.last_mut().expect("r >= 2") += 1;
    Ok(from_digit_list(&digits, frac.denominator()))
}

/// Applies whichever reflection matches the half `frac` lies in.
pub fn reflect(frac: ReducedFraction) -> ReflectionRecord {
    let (image, half) = if frac.is_lower_half() {
        (reflect_lower(frac), Half::Lower)
    } else {
        (reflect_upper(frac), Half::Upper)
    };
    ReflectionRecord {
        source: frac,
        image: image.expect("half was checked"),
        half,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuantCheck {
    pub holds: bool,
    /// `(i, lhs)` for every admissible index `i`.
    pub witnesses: Vec<(usize, i128)>,
}

/// Checks the continuant identity between the convergent denominators of
/// `a/N` and `a*/N`:
///
/// * lower half: `q_i(a) q_{r-i}(a*) + q_{i-1}(a) q_{r-i-1}(a*) = N` for `1 ≤ i ≤ r`;
/// * upper half: `q_i(a) q_{r-i+1}(a*) + q_{i-1}(a) q_{r-i}(a*) = N` for `2 ≤ i ≤ r-1`.
pub fn verify_continuant_identity(frac: ReducedFraction) -> ContinuantCheck {
    let rec = reflect(frac);
    let src = expand(rec.source);
    let img = expand(rec.image);
    let n = frac.denominator() as i128;
    let r = src.len() as isize;
    let (range, shift) = match rec.half {
        Half::Lower => (1..=r, 0),
        Half::Upper => (2..=r - 1, 1),
    };
    let q = |c: &ContinuedFraction, i: isize| c.q(i);
    let witnesses: Vec<(usize, i128)> = range
        .map(|i| {
            let lhs = q(&src, i) * q(&img, r - i + shift) + q(&src, i - 1) * q(&img, r - i - 1 + shift);
            (i as usize, lhs)
        })
        .collect();
    let holds = witnesses.iter().all(|&(_, lhs)| lhs == n);
    ContinuantCheck { holds, witnesses }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(a: u64, n: u64) -> ReducedFraction {
        ReducedFraction::new(a, n).unwrap()
    }

    #[test]
    fn lower_examples() {
        assert_eq!(reflect_lower(rf(3, 10)).unwrap(), rf(3, 10));
        assert_eq!(reflect_lower(rf(2, 7)).unwrap(), rf(3, 7));
        assert_eq!(reflect_lower(rf(1, 13)).unwrap(), rf(1, 13));
        assert_eq!(reflect_lower(rf(1, 2)).unwrap(), rf(1, 2));
        assert!(matches!(reflect_lower(rf(7, 10)), Err(Error::WrongHalf { .. })));
    }

    #[test]
    fn upper_examples() {
        assert_eq!(reflect_upper(rf(7, 10)).unwrap(), rf(7, 10));
        assert_eq!(reflect_upper(rf(5, 7)).unwrap(), rf(4, 7));
        for n in 3..40 {
            assert_eq!(reflect_upper(rf(n - 1, n)).unwrap(), rf(n - 1, n));
        }
        assert!(matches!(reflect_upper(rf(3, 10)), Err(Error::WrongHalf { .. })));
    }

    #[test]
    fn continuant_examples() {
        let c = verify_continuant_identity(rf(3, 10));
        assert!(c.holds);
        assert_eq!(c.witnesses[0], (1, 10));
        let c = verify_continuant_identity(rf(2, 7));
        assert!(c.holds);
        assert_eq!(c.witnesses[0], (1, 7));
        let c = verify_continuant_identity(rf(1, 11));
        assert!(c.holds);
        assert_eq!(c.witnesses, vec![(1, 11)]);
        // upper half, r = 3: only i = 2 is admissible
        let c = verify_continuant_identity(rf(5, 7));
        assert!(c.holds);
        assert_eq!(c.witnesses, vec![(2, 7)]);
    }

    #[test]
    fn upper_digit_relations() {
        for n in 3..150u64 {
            for a in crate::arith::coprime_residues(n).filter(|&a| 2 * a > n) {
                let src = expand(rf(a, n));
                let img = expand(reflect_upper(rf(a, n)).unwrap());
                let (s, t) = (src.digits(), img.digits());
                let r = s.len();
                if r < 3 {
                    assert_eq!(s, t);
                    continue;
                }
                assert_eq!(t.len(), r);
                assert_eq!(t[0], 1);
                assert_eq!(t[1], s[r - 1] - 1);
                assert_eq!(t[r - 1], s[1] + 1);
                for i in 3..r {
                    // a*_i = a_{r-i+2}, 1-indexed
                    assert_eq!(t[i - 1], s[r - i + 1]);
                }
            }
        }
    }
}
