//! Interval families `I(b/k, m)`, `I'(b/k, m)` and the weight function
//!
//! ```text
//! w_{f,η,θ}(b/k, x) = Σ_{m=η}^{θ} f(m) (1_{I(b/k,m)}(x) + 1_{I'(b/k,m)}(x)).
//! ```
//!
//! `I(b/k, m)` collects the reals whose expansion continues the canonical
//! expansion `b/k = [0; b_1, ..., b_s]` with the partial quotient `m`;
//! `I'(b/k, m)` does the same for the alternative expansion
//! `[0; b_1, ..., b_s - 1, 1]`. Both families are images of `t ∈ [m, m+1)`
//! under a Möbius map `t ↦ (tP + P')/(tQ + Q')` with determinant ±1. The
//! endpoint at `t = m` is included iff `m > 1`; the one at `t = m + 1` never is.
//!
//! All membership tests are exact. A point is located in its family by
//! solving for `t` rather than scanning `m`, so evaluation costs O(1) per
//! `(b/k, x)` pair.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::arith::{coprime_residues, gcd, totient};
use crate::cf::{ReducedFraction, WeightFn, Window};
use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// Moduli must stay below this bound so that interval arithmetic fits in `i128`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// An interval in `[0, 1]` with rational endpoints and explicit inclusion flags.
/// `lo == hi` is only used for the degenerate closed interval `[x, x]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalQ {
    pub lo: ExactRational,
    pub hi: ExactRational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl IntervalQ {
    pub fn new(lo: ExactRational, hi: ExactRational, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        let zero = ExactRational::zero();
        let one = ExactRational::one();
        if lo < zero || hi > one {
            return Err(Error::BadRange(format!("[{lo}, {hi}] is not inside [0, 1]")));
        }
        if lo > hi || (lo == hi && !(lo_closed && hi_closed)) {
            return Err(Error::BadRange(format!("empty interval with endpoints {lo}, {hi}")));
        }
        Ok(IntervalQ { lo, hi, lo_closed, hi_closed })
    }

    pub fn closed(lo: ExactRational, hi: ExactRational) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: ExactRational, hi: ExactRational) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }

    pub fn unit() -> Self {
        IntervalQ {
            lo: ExactRational::zero(),
            hi: ExactRational::one(),
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn measure(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }

    /// True when every point of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &IntervalQ) -> bool {
        let lo_ok = self.lo > other.lo || (self.lo == other.lo && (other.lo_closed || !self.lo_closed));
        let hi_ok = self.hi < other.hi || (self.hi == other.hi && (other.hi_closed || !self.hi_closed));
        lo_ok && hi_ok
    }
}

impl std::fmt::Display for IntervalQ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Möbius parametrisation `t ↦ (tP + P')/(tQ + Q')` of one interval family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Branch {
    p: i128,
    p_tail: i128,
    q: i128,
    q_tail: i128,
}

impl Branch {
    fn point(&self, t: i128) -> Ratio<i128> {
        Ratio::new(t * self.p + self.p_tail, t * self.q + self.q_tail)
    }

    /// `1 / ((mQ + Q')((m+1)Q + Q'))`, the length of the `m`-th interval.
    fn measure(&self, m: i128) -> ExactRational {
        let a = m * self.q + self.q_tail;
        let b = (m + 1) * self.q + self.q_tail;
        ExactRational::new(1, a) / ExactRational::from_integer(b)
    }

    fn interval(&self, m: u64) -> IntervalQ {
        let m = m as i128;
        let at_m = self.point(m);
        let at_next = self.point(m + 1);
        let inc = m > 1;
        let (lo, hi, lo_closed, hi_closed) = if at_m < at_next {
            (at_m, at_next, inc, false)
        } else {
            (at_next, at_m, false, inc)
        };
        IntervalQ { lo: lo.into(), hi: hi.into(), lo_closed, hi_closed }
    }

    /// The `m` with `x ∈` the `m`-th interval of this family, if any.
    #[inline]
    fn locate(&self, u: i128, v: i128) -> Option<u64> {
        // x = u/v = (tP + P')/(tQ + Q')  =>  t = (P'v - uQ') / (uQ - Pv)
        let mut num = self.p_tail * v - u * self.q_tail;
        let mut den = u * self.q - self.p * v;
        if den == 0 {
            return None;
        }
        if den < 0 {
            num = -num;
            den = -den;
        }
        if num < den {
            // t < 1
            return None;
        }
        let (m, rem) = num.div_rem(&den);
        if m == 1 && rem == 0 {
            // t = 1 is the excluded left end of the m = 1 interval
            return None;
        }
        u64::try_from(m).ok()
    }
}

/// The two families attached to one `b/k`.
#[derive(Clone, Copy, Debug)]
struct Families {
    plain: Branch,
    primed: Branch,
}

fn check_modulus(b: u64, k: u64) -> Result<()> {
    if k < 1 || b < 1 || b > k {
        return Err(Error::InvalidFraction { a: b, n: k, reason: "need 1 <= b <= k" });
    }
    if k >= MAX_MODULUS {
        return Err(Error::Overflow(format!("modulus {k} exceeds 2^31")));
    }
    if gcd(b, k) != 1 {
        return Err(Error::NotCoprime(b, k));
    }
    Ok(())
}

fn families(b: u64, k: u64) -> Result<Families> {
    check_modulus(b, k)?;
    if k == 1 {
        // I(1, m) = {[0; t]}, I'(1, m) = {[0; 1, t]}
        return Ok(Families {
            plain: Branch { p: 0, p_tail: 1, q: 1, q_tail: 0 },
            primed: Branch { p: 1, p_tail: 0, q: 1, q_tail: 1 },
        });
    }
    let (mut p_prev, mut p) = (1i128, 0i128);
    let (mut q_prev, mut q) = (0i128, 1i128);
    let (mut x, mut y) = (b, k);
    while x != 0 {
        let d = (y / x) as i128;
        (x, y) = (y % x, x);
        (p_prev, p) = (p, d * p + p_prev);
        (q_prev, q) = (q, d * q + q_prev);
    }
    debug_assert_eq!((p, q), (b as i128, k as i128));
    Ok(Families {
        plain: Branch { p, p_tail: p_prev, q, q_tail: q_prev },
        primed: Branch { p, p_tail: p - p_prev, q, q_tail: q - q_prev },
    })
}

fn check_digit(m: u64) -> Result<()> {
    if m < 1 {
        return Err(Error::BadDigit(m));
    }
    Ok(())
}

/// `I(b/k, m)`.
pub fn interval_i(b: u64, k: u64, m: u64) -> Result<IntervalQ> {
    check_digit(m)?;
    Ok(families(b, k)?.plain.interval(m))
}

/// `I'(b/k, m)`.
pub fn interval_i_prime(b: u64, k: u64, m: u64) -> Result<IntervalQ> {
    check_digit(m)?;
    Ok(families(b, k)?.primed.interval(m))
}

/// Exact measure of `I(b/k, m)` from the closed form
/// `1/((m q_s + q_{s-1})((m+1) q_s + q_{s-1}))`.
pub fn measure_i(b: u64, k: u64, m: u64) -> Result<ExactRational> {
    check_digit(m)?;
    Ok(families(b, k)?.plain.measure(m as i128))
}

/// Exact measure of `I'(b/k, m)`: `1/(((m+1) q_s - q_{s-1})((m+2) q_s - q_{s-1}))`.
pub fn measure_i_prime(b: u64, k: u64, m: u64) -> Result<ExactRational> {
    check_digit(m)?;
    Ok(families(b, k)?.primed.measure(m as i128))
}

/// Whichever of `I(b/k, m)`, `I'(b/k, m)` lies in `[0, b/k]`.
pub fn interval_left(b: u64, k: u64, m: u64) -> Result<IntervalQ> {
    if k < 2 {
        return Err(Error::InvalidFraction { a: b, n: k, reason: "need k >= 2" });
    }
    let plain = interval_i(b, k, m)?;
    let centre = ExactRational::new(b, k);
    if plain.hi <= centre {
        Ok(plain)
    } else {
        interval_i_prime(b, k, m)
    }
}

/// One-sided weight `Σ_{m=η}^{θ} f(m) 1_{I_left(b/k, m)}(x)`.
pub fn weight_left_eval(b: u64, k: u64, x: &ExactRational, f: &WeightFn, w: &Window) -> Result<ExactRational> {
    f.validate(w)?;
    let left = interval_left(b, k, 1)?;
    let fam = families(b, k)?;
    // the side of b/k does not depend on m
    let branch = if left == fam.plain.interval(1) { fam.plain } else { fam.primed };
    let (u, v) = to_ratio(x)?;
    Ok(match branch.locate(u, v) {
        Some(m) if w.contains(m) => f.value(m),
        _ => ExactRational::zero(),
    })
}

fn to_ratio(x: &ExactRational) -> Result<(i128, i128)> {
    let r = x
        .to_ratio_i128()
        .filter(|r| r.numer().unsigned_abs() < (1u128 << 64) && *r.denom() < (1i128 << 64))
        .ok_or_else(|| Error::Overflow(format!("{x} has components beyond 64 bits")))?;
    if r.numer() < &0 || r.numer() > r.denom() {
        return Err(Error::BadRange(format!("{x} is not in [0, 1]")));
    }
    Ok((*r.numer(), *r.denom()))
}

/// `w_{f,η,θ}(b/k, x)`.
pub fn weight_eval(b: u64, k: u64, x: &ExactRational, f: &WeightFn, w: &Window) -> Result<ExactRational> {
    f.validate(w)?;
    let fam = families(b, k)?;
    let (u, v) = to_ratio(x)?;
    let mut total = ExactRational::zero();
    for branch in [fam.plain, fam.primed] {
        if let Some(m) = branch.locate(u, v) {
            if w.contains(m) {
                total += f.value(m);
            }
        }
    }
    Ok(total)
}

/// All `b ∈ ℤ_k*` for a fixed modulus, with their interval families
/// precomputed, and a fixed weight and window.
#[derive(Clone, Debug)]
pub struct WeightRow {
    k: u64,
    f: WeightFn,
    window: Window,
    scale: i128,
    entries: Vec<(u64, Families)>,
}

impl WeightRow {
    pub fn new(k: u64, f: WeightFn, window: Window) -> Result<Self> {
        f.validate(&window)?;
        let entries = coprime_residues(k)
            .map(|b| families(b, k).map(|fam| (b, fam)))
            .collect::<Result<Vec<_>>>()?;
        let scale = f.scale();
        Ok(WeightRow { k, f, window, scale, entries })
    }

    pub fn modulus(&self) -> u64 {
        self.k
    }

    /// `Σ_{b ∈ ℤ_k*} w(b/k, u/v) · scale`, as an integer.
    fn scaled_total(&self, u: i128, v: i128) -> i128 {
        let mut total = 0i128;
        for (_, fam) in &self.entries {
            for branch in [fam.plain, fam.primed] {
                if let Some(m) = branch.locate(u, v) {
                    if self.window.contains(m) {
                        total += self.f.scaled_value(m);
                    }
                }
            }
        }
        total
    }

    /// `Σ_{b ∈ ℤ_k*} w(b/k, x)`.
    pub fn total_at(&self, x: &ExactRational) -> Result<ExactRational> {
        let (u, v) = to_ratio(x)?;
        Ok(ExactRational::new(self.scaled_total(u, v), self.scale))
    }

    /// `Σ_{b ∈ ℤ_k*} w(b/k, a/N)`.
    pub fn total_at_fraction(&self, frac: ReducedFraction) -> ExactRational {
        let t = self.scaled_total(frac.numerator() as i128, frac.denominator() as i128);
        ExactRational::new(t, self.scale)
    }

    /// `Σ_{b ∈ ℤ_k*} ∫₀¹ w(b/k, x) dx` from the closed-form measures.
    pub fn integral(&self) -> Result<ExactRational> {
        let theta = self.window.finite_theta()?;
        let mut total = ExactRational::zero();
        for m in self.window.eta()..=theta {
            let fm = self.f.value(m);
            if fm.is_zero() {
                continue;
            }
            let mut lengths = ExactRational::zero();
            for (_, fam) in &self.entries {
                lengths += fam.plain.measure(m as i128);
                lengths += fam.primed.measure(m as i128);
            }
            total += fm * lengths;
        }
        Ok(total)
    }
}

/// Checks `Σ_{i : q_{i-1} ∈ A} 1{η ≤ a_i ≤ θ} f(a_i) = Σ_{k∈A} Σ_{b∈ℤ_k*} w(b/k, a/N)`.
pub fn counting_identity_check(frac: ReducedFraction, moduli: &[u64], f: &WeightFn, w: &Window) -> Result<bool> {
    let rows = moduli
        .iter()
        .map(|&k| WeightRow::new(k, f.clone(), *w))
        .collect::<Result<Vec<_>>>()?;
    counting_identity_with_rows(frac, &rows)
}

/// As [`counting_identity_check`] with rows built once by the caller.
pub fn counting_identity_with_rows(frac: ReducedFraction, rows: &[WeightRow]) -> Result<bool> {
    let n = frac.denominator();
    let Some(first) = rows.first() else {
        return Ok(true);
    };
    let (f, w) = (&first.f, &first.window);
    if let Some(bad) = rows.iter().find(|r| r.k < 1 || r.k >= n) {
        return Err(Error::BadRange(format!("modulus {} is outside 1..{}", bad.k, n - 1)));
    }
    let cf = crate::cf::expand(frac);
    let mut lhs = ExactRational::zero();
    for (i, &d) in cf.digits().iter().enumerate() {
        let q_prev = cf.q(i as isize) as u64;
        if w.contains(d) && rows.iter().any(|r| r.k == q_prev) {
            lhs += f.value(d);
        }
    }
    let rhs: ExactRational = rows.iter().map(|r| r.total_at_fraction(frac)).sum();
    Ok(lhs == rhs)
}

/// `W_{k,f} = (1/φ(N)) Σ_{a∈ℤ_N*} Σ_{b∈ℤ_k*} w(b/k, a/N)`.
pub fn row_sum(n: u64, k: u64, f: &WeightFn, w: &Window) -> Result<ExactRational> {
    if n < 2 || k < 1 || k >= n {
        return Err(Error::BadRange(format!("need 1 <= k <= N-1, got k = {k}, N = {n}")));
    }
    let row = WeightRow::new(k, f.clone(), *w)?;
    let total: i128 = coprime_residues(n)
        .map(|a| row.scaled_total(a as i128, n as i128))
        .sum();
    Ok(ExactRational::new(total, row.scale * totient(n) as i128))
}

/// The majorant `(2N/(φ(N) k)) (f(θ)/(θ+1) + Σ_{m=η}^{θ} f(m)/(m(m+1)))` for
/// `W_{k,f}`, with an unbounded window read as `θ = N`.
pub fn row_sum_bound(n: u64, k: u64, f: &WeightFn, w: &Window) -> Result<ExactRational> {
    let theta = w.theta_or(n);
    let w = Window::new(w.eta(), theta)?;
    f.validate(&w)?;
    let mut inner = f.value(theta) / ExactRational::from(theta + 1);
    for m in w.eta()..=theta {
        inner += f.value(m) / ExactRational::from_integer(m as u128 * (m as u128 + 1));
    }
    let factor = ExactRational::new(2 * n as u128, totient(n) as u128 * k as u128);
    Ok(factor * inner)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralRow {
    pub exact: ExactRational,
    pub main_term: f64,
}

/// `Σ_{b∈ℤ_k*} ∫₀¹ w(b/k, x) dx` exactly, next to the asymptotic main term
/// `(2φ(k)/k²) Σ_m f(m) log(1 + 1/(m(m+2)))`.
pub fn integral_row(k: u64, f: &WeightFn, w: &Window) -> Result<IntegralRow> {
    let row = WeightRow::new(k, f.clone(), *w)?;
    let exact = row.integral()?;
    let theta = w.finite_theta()?;
    let gk: f64 = (w.eta()..=theta)
        .map(|m| {
            let m_f = m as f64;
            f.value_f64(m) * (1.0 / (m_f * (m_f + 2.0))).ln_1p()
        })
        .sum();
    let main_term = 2.0 * totient(k) as f64 / (k as f64 * k as f64) * gk;
    Ok(IntegralRow { exact, main_term })
}

/// Checks that the exact integral of the row equals
/// `Σ_m (f(m)/k²) Σ_{b∈ℤ_k*} [1/((m + b/k)(m+1 + b/k)) + 1/((m+1 - b/k)(m+2 - b/k))]`,
/// which follows from `b ↦ q_{s-1}` permuting ℤ_k*.
pub fn bijection_identity_check(k: u64, f: &WeightFn, w: &Window) -> Result<bool> {
    if k < 2 {
        return Err(Error::BadRange(format!("need k >= 2, got {k}")));
    }
    let lhs = WeightRow::new(k, f.clone(), *w)?.integral()?;
    let theta = w.finite_theta()?;
    let k_sq = ExactRational::from_integer(k as u128 * k as u128);
    let mut rhs = ExactRational::zero();
    for m in w.eta()..=theta {
        let mq = ExactRational::from(m);
        let one = ExactRational::one();
        let two = ExactRational::from(2u64);
        let mut inner = ExactRational::zero();
        for b in coprime_residues(k) {
            let y = ExactRational::new(b, k);
            let a1 = &mq + &y;
            let a2 = &a1 + &one;
            let c1 = &(&mq + &one) - &y;
            let c2 = &(&mq + &two) - &y;
            inner += (a1 * a2).recip();
            inner += (c1 * c2).recip();
        }
        rhs += f.value(m) / k_sq.clone() * inner;
    }
    Ok(lhs == rhs)
}
