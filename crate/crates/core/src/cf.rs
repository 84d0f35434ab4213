//! Canonical continued-fraction expansion of reduced fractions `a/N` and the
//! per-fraction statistics built on the partial quotients.
//!
//! For `a/N = [0; a_1, ..., a_r]` with `a_r ≥ 2` the convergents satisfy
//! `p_i = a_i p_{i-1} + p_{i-2}`, `q_i = a_i q_{i-1} + q_{i-2}` starting from
//! `p_{-1}/q_{-1} = 1/0` and `p_0/q_0 = 0/1`.

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// Denominators must stay below this bound so that every product of two
/// convergent components fits in an `i128`.
pub const MAX_DENOMINATOR: u64 = 1 << 62;

/// `a/N` with `1 ≤ a ≤ N-1`, `gcd(a, N) = 1`, `N ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedFraction {
    a: u64,
    n: u64,
}

impl ReducedFraction {
    pub fn new(a: u64, n: u64) -> Result<Self> {
        let bad = |reason| Err(Error::InvalidFraction { a, n, reason });
        if n < 2 {
            return bad("denominator must be at least 2");
        }
        if n >= MAX_DENOMINATOR {
            return bad("denominator must be below 2^62");
        }
        if a == 0 || a >= n {
            return bad("numerator must lie in [1, N-1]");
        }
        if gcd(a, n) != 1 {
            return bad("numerator and denominator are not coprime");
        }
        Ok(ReducedFraction { a, n })
    }

    /// Caller guarantees the invariants (used by the enumerators, which only
    /// produce coprime numerators).
    pub(crate) fn new_unchecked(a: u64, n: u64) -> Self {
        debug_assert!(n >= 2 && a >= 1 && a < n && gcd(a, n) == 1);
        ReducedFraction { a, n }
    }

    pub fn numerator(&self) -> u64 {
        self.a
    }

    pub fn denominator(&self) -> u64 {
        self.n
    }

    pub fn value(&self) -> ExactRational {
        ExactRational::new(self.a, self.n)
    }

    /// `a ≤ N/2`; the boundary `a = N/2` only occurs for `1/2`.
    pub fn is_lower_half(&self) -> bool {
        2 * self.a <= self.n
    }

    pub fn digits(&self) -> Digits {
        Digits { x: self.a, y: self.n }
    }
}

impl std::fmt::Display for ReducedFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.a, self.n)
    }
}

/// Allocation-free iterator over the partial quotients of `x/y` (Euclid).
#[derive(Clone, Debug)]
pub struct Digits {
    x: u64,
    y: u64,
}

impl Iterator for Digits {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        if self.x == 0 {
            return None;
        }
        let d = self.y / self.x;
        let rem = self.y % self.x;
        self.y = self.x;
        self.x = rem;
        Some(d)
    }
}

/// Window `η ≤ m ≤ θ` of admissible partial quotients. `θ = None` stands for
/// "no cutoff"; every partial quotient of `a/N` is at most `N`, so this
/// matches the window `[η, N]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    eta: u64,
    theta: Option<u64>,
}

impl Window {
    pub fn new(eta: u64, theta: u64) -> Result<Self> {
        if eta < 1 || theta < eta {
            return Err(Error::InvalidWindow { lo: eta, hi: theta });
        }
        Ok(Window { eta, theta: Some(theta) })
    }

    pub fn unbounded(eta: u64) -> Result<Self> {
        if eta < 1 {
            return Err(Error::InvalidWindow { lo: eta, hi: u64::MAX });
        }
        Ok(Window { eta, theta: None })
    }

    pub fn eta(&self) -> u64 {
        self.eta
    }

    pub fn theta(&self) -> Option<u64> {
        self.theta
    }

    /// Upper cutoff, reading "no cutoff" as `n`.
    pub fn theta_or(&self, n: u64) -> u64 {
        self.theta.unwrap_or(n)
    }

    /// Finite upper cutoff or an error for unbounded windows.
    pub fn finite_theta(&self) -> Result<u64> {
        self.theta.ok_or(Error::InvalidWindow { lo: self.eta, hi: u64::MAX })
    }

    #[inline]
    pub fn contains(&self, m: u64) -> bool {
        m >= self.eta && self.theta.is_none_or(|t| m <= t)
    }
}

/// The non-decreasing, non-negative weight `f` of a restricted sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightFn {
    /// `f(m) = 1`
    One,
    /// `f(m) = m`
    Identity,
    /// `f(m) = m²`
    Square,
    /// Tabulated values `f(start), f(start + 1), ...`.
    Table { start: u64, values: Vec<ExactRational> },
}

impl WeightFn {
    /// Tabulated weight; rejects negative entries and decreasing steps.
    pub fn table(start: u64, values: Vec<ExactRational>) -> Result<Self> {
        if start < 1 {
            return Err(Error::InvalidWeight("table must start at m >= 1".into()));
        }
        if values.is_empty() {
            return Err(Error::InvalidWeight("table is empty".into()));
        }
        if let Some(v) = values.iter().find(|v| v.is_negative()) {
            return Err(Error::InvalidWeight(format!("negative value {v}")));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::InvalidWeight(format!(
                "decreasing at m = {}",
                start + i as u64
            )));
        }
        for v in &values {
            if v.to_ratio_i128().is_none() {
                return Err(Error::InvalidWeight(format!("value {v} exceeds 128-bit range")));
            }
        }
        Ok(WeightFn::Table { start, values })
    }

    /// Checks that `f` is defined on the whole window. Built-in weights are
    /// non-decreasing and non-negative everywhere; tables were checked at
    /// construction and must cover `[η, θ]` without extrapolation.
    pub fn validate(&self, w: &Window) -> Result<()> {
        match self {
            WeightFn::Table { start, values } => {
                let end = start + values.len() as u64 - 1;
                match w.theta() {
                    None => Err(Error::InvalidWeight(
                        "a table cannot cover an unbounded window".into(),
                    )),
                    Some(theta) if w.eta() < *start || theta > end => {
                        Err(Error::InvalidWeight(format!(
                            "table covers [{start}, {end}] but window is [{}, {theta}]",
                            w.eta()
                        )))
                    }
                    Some(_) => Ok(()),
                }
            }
            _ => Ok(()),
        }
    }

    /// `f(m)`, or `None` outside a table's range.
    pub fn get(&self, m: u64) -> Option<ExactRational> {
        match self {
            WeightFn::One => Some(ExactRational::one()),
            WeightFn::Identity => Some(ExactRational::from(m)),
            WeightFn::Square => Some(ExactRational::from_integer(m as u128)).map(|x| &x * &x),
            WeightFn::Table { start, values } => {
                let i = m.checked_sub(*start)?;
                values.get(i as usize).cloned()
            }
        }
    }

    /// `f(m)`; panics outside a table's range (callers validate first).
    pub fn value(&self, m: u64) -> ExactRational {
        self.get(m)
            .unwrap_or_else(|| panic!("weight table does not cover m = {m}"))
    }

    pub fn value_f64(&self, m: u64) -> f64 {
        match self {
            WeightFn::One => 1.0,
            WeightFn::Identity => m as f64,
            WeightFn::Square => (m as f64) * (m as f64),
            WeightFn::Table { .. } => self.value(m).to_f64(),
        }
    }

    /// Common denominator of all values of `f` (1 for built-in weights).
    pub fn scale(&self) -> i128 {
        match self {
            WeightFn::Table { values, .. } => values.iter().fold(1i128, |acc, v| {
                let d = *v.to_ratio_i128().expect("validated").denom();
                num_integer::lcm(acc, d)
            }),
            _ => 1,
        }
    }

    /// `f(m) · scale()`, an integer.
    pub fn scaled_value(&self, m: u64) -> i128 {
        match self {
            WeightFn::One => 1,
            WeightFn::Identity => m as i128,
            WeightFn::Square => (m as i128) * (m as i128),
            WeightFn::Table { .. } => {
                let v = self.value(m).to_ratio_i128().expect("validated");
                v.numer() * (self.scale() / v.denom())
            }
        }
    }

    /// Short label used in reports.
    pub fn label(&self) -> String {
        match self {
            WeightFn::One => "one".into(),
            WeightFn::Identity => "identity".into(),
            WeightFn::Square => "square".into(),
            WeightFn::Table { start, values } => {
                format!("table[{}..{}]", start, start + values.len() as u64 - 1)
            }
        }
    }
}

/// Evaluates `[0; d_1, ..., d_n]` as `(p_n, q_n)`. Digits need not be
/// canonical. The result is in lowest terms because consecutive convergents
/// have determinant ±1.
pub fn evaluate_digits(digits: &[u64]) -> (i128, i128) {
    let (mut p_prev, mut p) = (1i128, 0i128);
    let (mut q_prev, mut q) = (0i128, 1i128);
    for &d in digits {
        let d = d as i128;
        (p_prev, p) = (p, d * p + p_prev);
        (q_prev, q) = (q, d * q + q_prev);
    }
    (p, q)
}

/// Canonical expansion `[0; a_1, ..., a_r]` with its convergent table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuedFraction {
    digits: Vec<u64>,
    /// `(p_i, q_i)` for `i = 0..=r`; entry 0 is `(0, 1)`.
    convergents: Vec<(i128, i128)>,
}

/// Expands `a/N` by Euclid's algorithm.
pub fn expand(frac: ReducedFraction) -> ContinuedFraction {
    ContinuedFraction::from_canonical(frac.digits().collect())
}

impl ContinuedFraction {
    fn from_canonical(digits: Vec<u64>) -> Self {
        let mut convergents = Vec::with_capacity(digits.len() + 1);
        let (mut p_prev, mut p) = (1i128, 0i128);
        let (mut q_prev, mut q) = (0i128, 1i128);
        convergents.push((p, q));
        for &d in &digits {
            let d = d as i128;
            (p_prev, p) = (p, d * p + p_prev);
            (q_prev, q) = (q, d * q + q_prev);
            convergents.push((p, q));
        }
        ContinuedFraction { digits, convergents }
    }

    /// Builds an expansion from a canonical digit list (all digits ≥ 1, last
    /// digit ≥ 2, value in `(0, 1)` with denominator below the size limit).
    pub fn from_digits(digits: Vec<u64>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d == 0) {
            return Err(Error::BadDigit(d));
        }
        match digits.last() {
            None => return Err(Error::InvalidFraction { a: 0, n: 1, reason: "empty expansion" }),
            Some(&last) if last < 2 => {
                return Err(Error::InvalidFraction {
                    a: 1,
                    n: 1,
                    reason: "last partial quotient must be at least 2",
                })
            }
            _ => {}
        }
        let (_, q) = evaluate_digits(&digits);
        if q >= MAX_DENOMINATOR as i128 {
            return Err(Error::Overflow(format!("denominator {q} exceeds 2^62")));
        }
        Ok(Self::from_canonical(digits))
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Number of partial quotients `r`.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn convergents(&self) -> &[(i128, i128)] {
        &self.convergents
    }

    /// `q_i` for `-1 ≤ i ≤ r`, with `q_{-1} = 0`.
    pub fn q(&self, i: isize) -> i128 {
        if i < 0 {
            debug_assert_eq!(i, -1);
            0
        } else {
            self.convergents[i as usize].1
        }
    }

    /// `p_i` for `-1 ≤ i ≤ r`, with `p_{-1} = 1`.
    pub fn p(&self, i: isize) -> i128 {
        if i < 0 {
            1
        } else {
            self.convergents[i as usize].0
        }
    }

    /// The fraction `p_r / q_r`.
    pub fn fraction(&self) -> ReducedFraction {
        let (p, q) = *self.convergents.last().expect("non-empty table");
        ReducedFraction::new_unchecked(p as u64, q as u64)
    }

    /// `S = Σ a_i`.
    pub fn sum(&self) -> u64 {
        self.digits.iter().sum()
    }

    /// `M = max a_i`.
    pub fn max(&self) -> u64 {
        self.digits.iter().copied().max().unwrap_or(0)
    }

    /// `L_[b,c] = #{i : b ≤ a_i ≤ c}`.
    pub fn count(&self, b: u64, c: u64) -> Result<u64> {
        let w = Window::new(b, c)?;
        Ok(self.digits.iter().filter(|&&d| w.contains(d)).count() as u64)
    }

    /// `S_alt = Σ (-1)^i a_i`.
    pub fn alt(&self) -> i128 {
        alternating(self.digits.iter().copied(), &Window { eta: 1, theta: None })
    }

    /// `S_{f,η,θ} = Σ 1{η ≤ a_i ≤ θ} f(a_i)`.
    pub fn restricted_sum(&self, f: &WeightFn, w: &Window) -> Result<ExactRational> {
        f.validate(w)?;
        let scale = f.scale();
        let total: i128 = self
            .digits
            .iter()
            .filter(|&&d| w.contains(d))
            .map(|&d| f.scaled_value(d))
            .sum();
        Ok(ExactRational::new(total, scale))
    }

    /// `(S_e, S_o)`: in-window partial quotients at even resp. odd indices.
    pub fn even_odd_sums(&self, w: &Window) -> (u64, u64) {
        let mut even = 0;
        let mut odd = 0;
        for (i, &d) in self.digits.iter().enumerate() {
            if !w.contains(d) {
                continue;
            }
            // digits are 1-indexed
            if i % 2 == 1 {
                even += d;
            } else {
                odd += d;
            }
        }
        (even, odd)
    }

    /// `S_{alt,η,θ} = Σ (-1)^i 1{η ≤ a_i ≤ θ} a_i`.
    pub fn restricted_alt(&self, w: &Window) -> i128 {
        alternating(self.digits.iter().copied(), w)
    }
}

#[inline]
pub(crate) fn alternating(digits: impl Iterator<Item = u64>, w: &Window) -> i128 {
    digits
        .enumerate()
        .filter(|(_, d)| w.contains(*d))
        .map(|(i, d)| if i % 2 == 0 { -(d as i128) } else { d as i128 })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(a: u64, n: u64) -> ContinuedFraction {
        expand(ReducedFraction::new(a, n).unwrap())
    }

    #[test]
    fn expansion_examples() {
        let c = cf(7, 10);
        assert_eq!(c.digits(), &[1, 2, 3]);
        assert_eq!(c.convergents(), &[(0, 1), (1, 1), (2, 3), (7, 10)]);
        assert_eq!(cf(1, 9).digits(), &[9]);
        assert_eq!(cf(5, 8).digits(), &[1, 1, 1, 2]);
    }

    #[test]
    fn rejects_invalid_fractions() {
        assert!(ReducedFraction::new(4, 10).is_err());
        assert!(ReducedFraction::new(0, 10).is_err());
        assert!(ReducedFraction::new(10, 10).is_err());
        assert!(ReducedFraction::new(1, 1).is_err());
        assert!(ReducedFraction::new(1, MAX_DENOMINATOR).is_err());
        assert!(ReducedFraction::new(1, MAX_DENOMINATOR - 1).is_ok());
    }

    #[test]
    fn basic_statistics() {
        let c = cf(7, 10);
        assert_eq!(c.sum(), 6);
        assert_eq!(c.max(), 3);
        assert_eq!(c.alt(), -2);
        assert_eq!(c.count(2, 3).unwrap(), 2);

        let c = cf(5, 8);
        assert_eq!(c.sum(), 5);
        assert_eq!(c.max(), 2);
        assert_eq!(c.count(1, 1).unwrap(), 3);

        for n in [2u64, 9, 31] {
            let c = cf(1, n);
            assert_eq!(c.sum(), n);
            assert_eq!(c.max(), n);
            assert_eq!(c.alt(), -(n as i128));
            assert_eq!(c.count(2, n).unwrap(), 1);
        }
        // [0;1,2] = 2/3
        assert_eq!(cf(2, 3).alt(), 1);
    }

    #[test]
    fn count_rejects_bad_windows() {
        let c = cf(7, 10);
        assert!(matches!(c.count(3, 2), Err(Error::InvalidWindow { .. })));
        assert!(matches!(c.count(0, 2), Err(Error::InvalidWindow { .. })));
    }

    #[test]
    fn restricted_sums() {
        let c = cf(7, 10);
        let w = Window::new(2, 3).unwrap();
        assert_eq!(c.restricted_sum(&WeightFn::Identity, &w).unwrap(), ExactRational::from(5u64));
        // θ below every digit
        let c9 = cf(1, 9);
        let w = Window::new(1, 8).unwrap();
        assert!(c9.restricted_sum(&WeightFn::Identity, &w).unwrap().is_zero());
        let c = cf(5, 8);
        let w = Window::new(1, 1).unwrap();
        assert_eq!(c.restricted_sum(&WeightFn::One, &w).unwrap(), ExactRational::from(3u64));
    }

    #[test]
    fn table_weights() {
        let half = ExactRational::new(1, 2);
        let f = WeightFn::table(1, vec![half.clone(), ExactRational::one(), ExactRational::new(3, 2)]).unwrap();
        let c = cf(7, 10);
        let w = Window::new(1, 3).unwrap();
        // 1/2 + 1 + 3/2
        assert_eq!(c.restricted_sum(&f, &w).unwrap(), ExactRational::from(3u64));
        // table must cover the window
        let w = Window::new(1, 4).unwrap();
        assert!(matches!(c.restricted_sum(&f, &w), Err(Error::InvalidWeight(_))));
        assert!(matches!(
            c.restricted_sum(&f, &Window::unbounded(1).unwrap()),
            Err(Error::InvalidWeight(_))
        ));
        assert!(WeightFn::table(1, vec![ExactRational::one(), half.clone()]).is_err());
        assert!(WeightFn::table(1, vec![-half]).is_err());
    }

    #[test]
    fn even_odd_examples() {
        let all = Window::new(1, 10).unwrap();
        assert_eq!(cf(7, 10).even_odd_sums(&all), (2, 4));
        assert_eq!(cf(1, 9).even_odd_sums(&Window::new(1, 9).unwrap()), (0, 9));
        assert_eq!(cf(5, 8).even_odd_sums(&all), (3, 2));
    }

    #[test]
    fn from_digits_requires_canonical_form() {
        assert!(ContinuedFraction::from_digits(vec![1, 2, 1]).is_err());
        assert!(ContinuedFraction::from_digits(vec![1, 0, 2]).is_err());
        assert!(ContinuedFraction::from_digits(vec![]).is_err());
        let c = ContinuedFraction::from_digits(vec![1, 2, 3]).unwrap();
        assert_eq!(c.fraction(), ReducedFraction::new(7, 10).unwrap());
    }

    #[test]
    fn evaluate_non_canonical() {
        // [0;1,2,1] = [0;1,3] = 3/4
        assert_eq!(evaluate_digits(&[1, 2, 1]), (3, 4));
        assert_eq!(evaluate_digits(&[]), (0, 1));
    }
}
