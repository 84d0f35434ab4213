//! Exact scans of one statistic over all `a ∈ ℤ_N*`.
//!
//! Every statistic is evaluated as an integer multiple of a fixed per-spec
//! scale (1 for S, M, L and S_alt, `12N` for Dedekind sums, the common
//! denominator of a weight table), so per-chunk accumulators are plain `i128`
//! and merging them is exact and order independent.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{coprime_residues, coprime_residues_in, prime_factors, totient};
use crate::cf::{ReducedFraction, WeightFn, Window, MAX_DENOMINATOR};
use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// Digits above this value land in the overflow bin of the histogram.
pub const HISTOGRAM_CAP: u64 = 64;

const CHUNK: u64 = 1 << 14;

/// `12/π²`
pub const TWELVE_OVER_PI_SQ: f64 = 12.0 / (PI * PI);

/// `{a/N : a ∈ ℤ_N*}` in increasing order.
pub fn enumerate_coprime(n: u64) -> Result<impl Iterator<Item = ReducedFraction>> {
    if n < 2 {
        return Err(Error::BadRange(format!("need N >= 2, got {n}")));
    }
    Ok(coprime_residues(n).map(move |a| ReducedFraction::new_unchecked(a, n)))
}

/// The statistic a scan accumulates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StatSpec {
    /// `S`
    Sum,
    /// `M`
    Max,
    /// `L_[b,c]`
    Count { b: u64, c: u64 },
    /// `S_alt`
    Alt,
    /// `D(a/N)`, via Barkan–Hickerson
    Dedekind,
    /// `S_{f,η,θ}`
    Restricted { f: WeightFn, window: Window },
}

impl StatSpec {
    pub fn count(b: u64, c: u64) -> Result<Self> {
        Window::new(b, c)?;
        Ok(StatSpec::Count { b, c })
    }

    pub fn restricted(f: WeightFn, window: Window) -> Result<Self> {
        f.validate(&window)?;
        Ok(StatSpec::Restricted { f, window })
    }

    pub fn label(&self) -> String {
        match self {
            StatSpec::Sum => "S".into(),
            StatSpec::Max => "M".into(),
            StatSpec::Count { b, c } => format!("L[{b},{c}]"),
            StatSpec::Alt => "S_alt".into(),
            StatSpec::Dedekind => "D".into(),
            StatSpec::Restricted { f, window } => match window.theta() {
                Some(t) => format!("S[{},{},{}]", f.label(), window.eta(), t),
                None => format!("S[{},{},N]", f.label(), window.eta()),
            },
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            StatSpec::Count { b, c } => Window::new(*b, *c).map(|_| ()).map_err(|e| Error::InvalidSpec(e.to_string())),
            StatSpec::Restricted { f, window } => f.validate(window).map_err(|e| Error::InvalidSpec(e.to_string())),
            _ => Ok(()),
        }
    }
}

/// Which values count towards a tail at threshold `t`:
/// `value ≥ center + t ln N`, or `|value − center| ≥ t ln N` when two-sided.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailRule {
    pub center: f64,
    pub two_sided: bool,
}

impl Default for TailRule {
    fn default() -> Self {
        TailRule { center: 0.0, two_sided: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions {
    pub workers: usize,
    pub rule: TailRule,
}

impl Default for ScanOptions {
    fn default() -> Self {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        ScanOptions { workers, rule: TailRule::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailCount {
    pub t: f64,
    pub count: u64,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleSummary {
    pub n: u64,
    pub phi: u64,
    pub stat: String,
    pub count: u64,
    pub sum: ExactRational,
    pub sum_sq: ExactRational,
    pub mean_exact: ExactRational,
    pub mean: f64,
    pub variance: f64,
    pub tail_rule: TailRule,
    pub tails: Vec<TailCount>,
    /// Number of partial quotients equal to `m`, summed over `ℤ_N*`.
    pub histogram: BTreeMap<u64, u64>,
    /// Number of partial quotients above [`HISTOGRAM_CAP`].
    pub histogram_overflow: u64,
}

/// Per-fraction evaluator with everything hoisted out of the hot loop.
enum Kernel {
    Sum,
    Max,
    Count(Window),
    Alt,
    Dedekind,
    Restricted { window: Window, table: Option<(u64, Vec<i128>)>, f: WeightFn },
}

impl Kernel {
    fn new(spec: &StatSpec) -> Self {
        match spec {
            StatSpec::Sum => Kernel::Sum,
            StatSpec::Max => Kernel::Max,
            StatSpec::Count { b, c } => Kernel::Count(Window::new(*b, *c).expect("validated")),
            StatSpec::Alt => Kernel::Alt,
            StatSpec::Dedekind => Kernel::Dedekind,
            StatSpec::Restricted { f, window } => {
                let table = match f {
                    WeightFn::Table { start, values } => {
                        let end = start + values.len() as u64 - 1;
                        Some((*start, (*start..=end).map(|m| f.scaled_value(m)).collect()))
                    }
                    _ => None,
                };
                Kernel::Restricted { window: *window, table, f: f.clone() }
            }
        }
    }

    /// The statistic of `a/n` times the statistic's integer scale; records digits in `hist`.
    #[inline]
    fn eval(&self, a: u64, n: u64, hist: &mut [u64; HISTOGRAM_CAP as usize + 1]) -> i128 {
        let (mut x, mut y) = (a, n);
        let (mut q_prev, mut q) = (0u64, 1u64);
        let mut r = 0usize;
        let mut acc: i128 = 0;
        while x != 0 {
            let d = y / x;
            (x, y) = (y - d * x, x);
            (q_prev, q) = (q, d * q + q_prev);
            r += 1;
            hist[if d > HISTOGRAM_CAP { 0 } else { d as usize }] += 1;
            // 1-indexed digit i = r carries the sign (-1)^r
            let signed = if r % 2 == 1 { -(d as i128) } else { d as i128 };
            match self {
                Kernel::Sum => acc += d as i128,
                Kernel::Max => acc = acc.max(d as i128),
                Kernel::Count(w) => acc += w.contains(d) as i128,
                Kernel::Alt | Kernel::Dedekind => acc += signed,
                Kernel::Restricted { window, table, f } => {
                    if window.contains(d) {
                        acc += match table {
                            Some((start, vals)) => vals[(d - start) as usize],
                            None => f.scaled_value(d),
                        };
                    }
                }
            }
        }
        if let Kernel::Dedekind = self {
            // 12N D = [-3N if r odd] + a - (-1)^r q_{r-1} - N S_alt
            let (a, n) = (a as i128, n as i128);
            let odd = r % 2 == 1;
            let head = if odd { -3 * n } else { 0 };
            let sign = if odd { -1 } else { 1 };
            acc = head + a - sign * q_prev as i128 - n * acc;
        }
        acc
    }

    fn scale(&self, n: u64) -> i128 {
        match self {
            Kernel::Dedekind => 12 * n as i128,
            Kernel::Restricted { table: Some(_), f, .. } => f.scale(),
            _ => 1,
        }
    }
}

#[derive(Clone)]
struct Accumulator {
    count: u64,
    sum: i128,
    sum_sq: i128,
    tails: Vec<u64>,
    hist: [u64; HISTOGRAM_CAP as usize + 1],
    overflow: bool,
}

impl Accumulator {
    fn new(thresholds: usize) -> Self {
        Accumulator {
            count: 0,
            sum: 0,
            sum_sq: 0,
            tails: vec![0; thresholds],
            hist: [0; HISTOGRAM_CAP as usize + 1],
            overflow: false,
        }
    }

    fn merge(mut self, other: Accumulator) -> Accumulator {
        self.count += other.count;
        match (self.sum.checked_add(other.sum), self.sum_sq.checked_add(other.sum_sq)) {
            (Some(s), Some(q)) => {
                self.sum = s;
                self.sum_sq = q;
            }
            _ => self.overflow = true,
        }
        self.overflow |= other.overflow;
        for (a, b) in self.tails.iter_mut().zip(&other.tails) {
            *a += b;
        }
        for (a, b) in self.hist.iter_mut().zip(&other.hist) {
            *a += b;
        }
        self
    }
}

/// [`scan_with`] using every available core and one-sided tails.
pub fn scan(n: u64, spec: &StatSpec, thresholds: &[f64]) -> Result<EnsembleSummary> {
    scan_with(n, spec, thresholds, &ScanOptions::default())
}

/// Accumulates `spec` over `ℤ_N*`. Thresholds are multiples of `ln N`; see
/// [`TailRule`]. The result does not depend on `opts.workers`.
pub fn scan_with(n: u64, spec: &StatSpec, thresholds: &[f64], opts: &ScanOptions) -> Result<EnsembleSummary> {
    if n < 2 {
        return Err(Error::BadRange(format!("need N >= 2, got {n}")));
    }
    if n >= MAX_DENOMINATOR {
        return Err(Error::Overflow(format!("N = {n} exceeds 2^62")));
    }
    if opts.workers == 0 {
        return Err(Error::BadRange("workers must be at least 1".into()));
    }
    spec.validate()?;
    let kernel = Kernel::new(spec);
    let scale = kernel.scale(n);
    let ln_n = (n as f64).ln();
    let scale_f = scale as f64;
    let center = opts.rule.center * scale_f;
    let cuts: Vec<f64> = thresholds.iter().map(|t| t * ln_n * scale_f).collect();
    let primes = prime_factors(n);
    let chunks = (n - 1).div_ceil(CHUNK);

    let run = |c: u64| -> Accumulator {
        let lo = 1 + c * CHUNK;
        let hi = (lo + CHUNK - 1).min(n - 1);
        let mut acc = Accumulator::new(cuts.len());
        for a in coprime_residues_in(lo, hi, &primes) {
            let v = kernel.eval(a, n, &mut acc.hist);
            acc.count += 1;
            match v.checked_mul(v).and_then(|sq| acc.sum_sq.checked_add(sq)) {
                Some(sq) => acc.sum_sq = sq,
                None => acc.overflow = true,
            }
            acc.sum += v;
            let dev = v as f64 - center;
            let dev = if opts.rule.two_sided { dev.abs() } else { dev };
            for (tail, cut) in acc.tails.iter_mut().zip(&cuts) {
                if dev >= *cut {
                    *tail += 1;
                }
            }
        }
        acc
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::NotSupported(format!("cannot start worker pool: {e}")))?;
    let parts: Vec<Accumulator> = pool.install(|| (0..chunks).into_par_iter().map(run).collect());
    let total = parts
        .into_iter()
        .fold(Accumulator::new(cuts.len()), Accumulator::merge);
    if total.overflow {
        return Err(Error::Overflow(format!("accumulator overflow scanning {} at N = {n}", spec.label())));
    }

    let phi = totient(n);
    debug_assert_eq!(total.count, phi);
    let sum = ExactRational::new(total.sum, scale);
    let sum_sq = ExactRational::new(total.sum_sq, scale * scale);
    let count = ExactRational::from(total.count);
    let mean_exact = &sum / &count;
    let variance_exact = &sum_sq / &count - &mean_exact * &mean_exact;
    let tails = thresholds
        .iter()
        .zip(&total.tails)
        .map(|(&t, &c)| TailCount { t, count: c, fraction: c as f64 / total.count as f64 })
        .collect();
    let histogram = (1..=HISTOGRAM_CAP)
        .map(|m| (m, total.hist[m as usize]))
        .filter(|&(_, c)| c > 0)
        .collect();
    Ok(EnsembleSummary {
        n,
        phi,
        stat: spec.label(),
        count: total.count,
        mean: mean_exact.to_f64(),
        variance: variance_exact.to_f64(),
        sum,
        sum_sq,
        mean_exact,
        tail_rule: opts.rule,
        tails,
        histogram,
        histogram_overflow: total.hist[0],
    })
}

/// `log₂(1 + 1/(m(m+2)))`
pub fn gauss_kuzmin(m: u64) -> f64 {
    let m = m as f64;
    (1.0 / (m * (m + 2.0))).ln_1p() / std::f64::consts::LN_2
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DigitRow {
    pub m: u64,
    pub count: u64,
    /// `(π² / (12 ln 2 ln N)) · count / φ(N)`
    pub freq: f64,
    pub target: f64,
    pub diff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DigitHistogram {
    pub n: u64,
    pub phi: u64,
    pub rows: Vec<DigitRow>,
}

/// Counts of each partial quotient `m ≤ m_max` over all expansions of `ℤ_N*`,
/// normalized for comparison with the Gauß–Kuzmin law.
pub fn digit_histogram(n: u64, m_max: u64) -> Result<DigitHistogram> {
    digit_histogram_with(n, m_max, ScanOptions::default().workers)
}

pub fn digit_histogram_with(n: u64, m_max: u64, workers: usize) -> Result<DigitHistogram> {
    if n < 3 {
        return Err(Error::BadRange(format!("need N >= 3, got {n}")));
    }
    if !(1..=HISTOGRAM_CAP).contains(&m_max) {
        return Err(Error::BadRange(format!("m_max must lie in 1..={HISTOGRAM_CAP}")));
    }
    let opts = ScanOptions { workers, rule: TailRule::default() };
    let s = scan_with(n, &StatSpec::Sum, &[], &opts)?;
    let norm = PI * PI / (12.0 * std::f64::consts::LN_2 * (n as f64).ln() * s.phi as f64);
    let rows = (1..=m_max)
        .map(|m| {
            let count = s.histogram.get(&m).copied().unwrap_or(0);
            let freq = norm * count as f64;
            let target = gauss_kuzmin(m);
            DigitRow { m, count, freq, target, diff: freq - target }
        })
        .collect();
    Ok(DigitHistogram { n, phi: s.phi, rows })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub d_prime: f64,
    pub xi: f64,
    pub mu: f64,
}

/// `μ_[b,c] = (12/π²) Σ_{m=b}^{c} ln(1 + 1/(m(m+2)))`
pub fn mu(b: u64, c: u64) -> Result<f64> {
    let w = Window::new(b, c)?;
    Ok(TWELVE_OVER_PI_SQ * (w.eta()..=c).map(gk_log).sum::<f64>())
}

fn gk_log(m: u64) -> f64 {
    let m = m as f64;
    (1.0 / (m * (m + 2.0))).ln_1p()
}

/// The constants `A, B, C, D, D', Ξ` of the weight `f` on `[η, θ]`, and `μ_[b,c]`.
pub fn constants(f: &WeightFn, w: &Window, b: u64, c: u64) -> Result<TheoremConstants> {
    f.validate(w)?;
    let theta = w.finite_theta()?;
    let eta = w.eta();
    let ms = eta..=theta;
    let fv = |m: u64| f.value_f64(m);
    let a = TWELVE_OVER_PI_SQ * ms.clone().map(|m| fv(m) * gk_log(m)).sum::<f64>();
    let f_theta = fv(theta);
    let b_const = a + f_theta / theta as f64;
    if f_theta == 0.0 {
        return Err(Error::DivisionByZero("C requires f(θ) > 0"));
    }
    let c_const = 5.0 * f_theta / b_const;
    let d = b_const * ms.clone().map(|m| fv(m) / (m as f64).powi(4)).sum::<f64>();
    let d_prime = b_const * ms.clone().map(|m| fv(m) / (m as f64).powi(3)).sum::<f64>();
    let (ef, tf) = (eta as f64, theta as f64);
    let steps: f64 = (eta..theta)
        .map(|m| {
            let mf = m as f64;
            2.0 * (fv(m + 1) - fv(m)).powi(2) / ((mf + 1.0) * (mf + 2.0))
        })
        .sum();
    let xi = 2.0 * fv(eta).powi(2) / (ef * (ef + 1.0)) + steps + 2.0 * f_theta.powi(2) / ((tf + 1.0) * (tf + 2.0));
    Ok(TheoremConstants { a, b: b_const, c: c_const, d, d_prime, xi, mu: mu(b, c)? })
}

/// Which tail or moment theorem a harness run checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "theorem")]
pub enum Theorem {
    /// `|S − (12/π²) ln N ln ln N| ≥ t ln N`, with `t · fraction ≤ 3`.
    T1 { ts: Vec<f64> },
    /// `M ≥ t ln N`, with `fraction ∈ [0.7, 1.25] · 12/(π² t)` and non-increasing in `t`.
    T2 { ts: Vec<f64> },
    /// Mean of `L_[b,c]` within 10% of `μ_[b,c] ln N`.
    T3 { b: u64, c: u64 },
    /// `|D| ≥ t ln N`, with `t · fraction ≤ 3`.
    T4 { ts: Vec<f64> },
}

pub const T1_PRODUCT_MAX: f64 = 3.0;
pub const T2_RATIO_RANGE: (f64, f64) = (0.7, 1.25);
pub const T3_RELATIVE_TOL: f64 = 0.10;
pub const T4_PRODUCT_MAX: f64 = 3.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessRow {
    pub t: f64,
    pub fraction: f64,
    /// The theorem's reference value: `12/(π² t)` for T2, otherwise the bound on the product.
    pub reference: f64,
    /// `fraction / reference` for T2, `t · fraction` for T1 and T4.
    pub score: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessReport {
    pub n: u64,
    pub phi: u64,
    pub theorem: String,
    pub rows: Vec<HarnessRow>,
    /// T3 only: empirical mean, `μ_[b,c] ln N`, their ratio, the empirical
    /// variance and the shape `(ln N)²/b⁴ + ln N ln ln N / b` of its bound.
    pub mean: Option<f64>,
    pub expected_mean: Option<f64>,
    pub ratio: Option<f64>,
    pub variance: Option<f64>,
    pub variance_shape: Option<f64>,
    pub monotone: bool,
    pub pass: bool,
}

pub fn thm_harness(n: u64, which: &Theorem) -> Result<HarnessReport> {
    thm_harness_with(n, which, ScanOptions::default().workers)
}

pub fn thm_harness_with(n: u64, which: &Theorem, workers: usize) -> Result<HarnessReport> {
    if n < 3 {
        return Err(Error::BadRange(format!("need N >= 3, got {n}")));
    }
    let ln_n = (n as f64).ln();
    let lnln = ln_n.ln();
    let opts = |center: f64, two_sided: bool| ScanOptions { workers, rule: TailRule { center, two_sided } };
    let mut report = HarnessReport {
        n,
        phi: 0,
        theorem: String::new(),
        rows: Vec::new(),
        mean: None,
        expected_mean: None,
        ratio: None,
        variance: None,
        variance_shape: None,
        monotone: true,
        pass: true,
    };
    let product_rows = |s: &EnsembleSummary, bound: f64| -> Vec<HarnessRow> {
        s.tails
            .iter()
            .map(|tc| {
                let score = tc.t * tc.fraction;
                HarnessRow { t: tc.t, fraction: tc.fraction, reference: bound, score, pass: score <= bound }
            })
            .collect()
    };
    let summary = match which {
        Theorem::T1 { ts } => {
            report.theorem = "T1".into();
            let s = scan_with(n, &StatSpec::Sum, ts, &opts(TWELVE_OVER_PI_SQ * ln_n * lnln, true))?;
            report.rows = product_rows(&s, T1_PRODUCT_MAX);
            s
        }
        Theorem::T4 { ts } => {
            report.theorem = "T4".into();
            let s = scan_with(n, &StatSpec::Dedekind, ts, &opts(0.0, true))?;
            report.rows = product_rows(&s, T4_PRODUCT_MAX);
            s
        }
        Theorem::T2 { ts } => {
            report.theorem = "T2".into();
            let s = scan_with(n, &StatSpec::Max, ts, &opts(0.0, false))?;
            let (lo, hi) = T2_RATIO_RANGE;
            report.rows = s
                .tails
                .iter()
                .map(|tc| {
                    let reference = TWELVE_OVER_PI_SQ / tc.t;
                    let score = tc.fraction / reference;
                    HarnessRow { t: tc.t, fraction: tc.fraction, reference, score, pass: (lo..=hi).contains(&score) }
                })
                .collect();
            s
        }
        Theorem::T3 { b, c } => {
            report.theorem = "T3".into();
            let s = scan_with(n, &StatSpec::count(*b, *c)?, &[], &opts(0.0, false))?;
            let expected = mu(*b, *c)? * ln_n;
            let ratio = s.mean / expected;
            let bf = *b as f64;
            report.mean = Some(s.mean);
            report.expected_mean = Some(expected);
            report.ratio = Some(ratio);
            report.variance = Some(s.variance);
            report.variance_shape = Some(ln_n * ln_n / bf.powi(4) + ln_n * lnln / bf);
            report.pass = (ratio - 1.0).abs() <= T3_RELATIVE_TOL;
            s
        }
    };
    report.phi = summary.phi;
    // tails are non-increasing in t when the thresholds are sorted
    let mut sorted: Vec<(f64, f64)> = report.rows.iter().map(|r| (r.t, r.fraction)).collect();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    report.monotone = sorted.windows(2).all(|w| w[1].1 <= w[0].1);
    report.pass = report.pass && report.rows.iter().all(|r| r.pass);
    if matches!(which, Theorem::T2 { .. }) {
        report.pass = report.pass && report.monotone;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PanovReport {
    pub n: u64,
    pub mean: ExactRational,
    /// `(6/π²)(ln N)²`
    pub target: f64,
    pub ratio: f64,
}

/// Mean of `S` over `ℤ_N*` against `(6/π²)(ln N)²`. Report only.
pub fn panov_mean_report(n: u64) -> Result<PanovReport> {
    panov_mean_report_with(n, ScanOptions::default().workers)
}

pub fn panov_mean_report_with(n: u64, workers: usize) -> Result<PanovReport> {
    let opts = ScanOptions { workers, rule: TailRule::default() };
    let s = scan_with(n, &StatSpec::Sum, &[], &opts)?;
    let ln_n = (n as f64).ln();
    let target = 6.0 / (PI * PI) * ln_n * ln_n;
    Ok(PanovReport { n, ratio: s.mean / target, mean: s.mean_exact, target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::expand;

    fn one_worker() -> ScanOptions {
        ScanOptions { workers: 1, rule: TailRule::default() }
    }

    #[test]
    fn enumerate_examples() {
        let a: Vec<u64> = enumerate_coprime(6).unwrap().map(|f| f.numerator()).collect();
        assert_eq!(a, vec![1, 5]);
        let a: Vec<u64> = enumerate_coprime(12).unwrap().map(|f| f.numerator()).collect();
        assert_eq!(a, vec![1, 5, 7, 11]);
        assert_eq!(enumerate_coprime(13).unwrap().count(), 12);
    }

    #[test]
    fn scan_examples() {
        let s = scan_with(10, &StatSpec::Sum, &[], &one_worker()).unwrap();
        assert_eq!(s.sum, ExactRational::from(32u64));
        assert_eq!(s.mean, 8.0);
        assert_eq!(s.phi, 4);
        let m = scan_with(3, &StatSpec::Max, &[], &one_worker()).unwrap();
        assert_eq!(m.mean, 2.5);
        let two = scan_with(2, &StatSpec::Sum, &[], &one_worker()).unwrap();
        assert_eq!(two.mean, 2.0);
        assert_eq!(two.variance, 0.0);
    }

    #[test]
    fn scan_matches_per_fraction_values() {
        let w = Window::new(2, 5).unwrap();
        let table = WeightFn::table(1, (0..6).map(|i| ExactRational::new(i, 3)).collect()).unwrap();
        let specs = [
            StatSpec::Sum,
            StatSpec::Max,
            StatSpec::count(1, 1).unwrap(),
            StatSpec::Alt,
            StatSpec::Dedekind,
            StatSpec::restricted(WeightFn::Square, w).unwrap(),
            StatSpec::restricted(table.clone(), w).unwrap(),
        ];
        for n in [2u64, 3, 10, 97, 360] {
            for spec in &specs {
                let s = scan_with(n, spec, &[], &one_worker()).unwrap();
                let mut sum = ExactRational::zero();
                let mut sum_sq = ExactRational::zero();
                for frac in enumerate_coprime(n).unwrap() {
                    let cf = expand(frac);
                    let v = match spec {
                        StatSpec::Sum => ExactRational::from(cf.sum()),
                        StatSpec::Max => ExactRational::from(cf.max()),
                        StatSpec::Count { b, c } => ExactRational::from(cf.count(*b, *c).unwrap()),
                        StatSpec::Alt => ExactRational::from(cf.alt()),
                        StatSpec::Dedekind => crate::dedekind::dedekind_direct(frac).unwrap(),
                        StatSpec::Restricted { f, window } => cf.restricted_sum(f, window).unwrap(),
                    };
                    sum_sq += &v * &v;
                    sum += v;
                }
                assert_eq!(s.sum, sum, "{} at N = {n}", spec.label());
                assert_eq!(s.sum_sq, sum_sq, "{} at N = {n}", spec.label());
            }
        }
    }

    #[test]
    fn tails_and_rules() {
        // M over N = 10 is {10, 3, 3, 9}
        let t = 9.0 / 10f64.ln();
        let s = scan_with(10, &StatSpec::Max, &[t], &one_worker()).unwrap();
        assert_eq!(s.tails[0].count, 2);
        assert_eq!(s.tails[0].fraction, 0.5);
        // |S - 8| >= 2 ln 10 ≈ 4.6 holds for none of {10, 6, 6, 10}
        let rule = TailRule { center: 8.0, two_sided: true };
        let s = scan_with(10, &StatSpec::Sum, &[0.5, 2.0], &ScanOptions { workers: 1, rule }).unwrap();
        assert_eq!(s.tails.iter().map(|c| c.count).collect::<Vec<_>>(), vec![4, 0]);
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let n = 100_003;
        let one = scan_with(n, &StatSpec::Dedekind, &[1.0, 2.0], &one_worker()).unwrap();
        let many = scan_with(n, &StatSpec::Dedekind, &[1.0, 2.0], &ScanOptions { workers: 4, ..one_worker() }).unwrap();
        assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&many).unwrap());
    }

    #[test]
    fn scan_errors() {
        assert!(matches!(scan(1, &StatSpec::Sum, &[]), Err(Error::BadRange(_))));
        assert!(matches!(scan(1 << 62, &StatSpec::Sum, &[]), Err(Error::Overflow(_))));
        let bad = StatSpec::Count { b: 3, c: 2 };
        assert!(matches!(scan(10, &bad, &[]), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn histogram_examples() {
        // [0;10], [0;3,3], [0;1,2,3], [0;1,9]
        let s = scan_with(10, &StatSpec::Sum, &[], &one_worker()).unwrap();
        assert_eq!(s.histogram.get(&3), Some(&3));
        assert_eq!(s.histogram.get(&11), None);
        let h = digit_histogram_with(10, 12, 1).unwrap();
        assert_eq!(h.rows[2].count, 3);
        assert_eq!(h.rows[10].count, 0);
        assert!((gauss_kuzmin(1) - 0.415037).abs() < 1e-6);
    }

    #[test]
    fn constants_examples() {
        let one = Window::new(1, 1).unwrap();
        let k = constants(&WeightFn::One, &one, 1, 1).unwrap();
        assert!((k.mu - 0.3498).abs() < 1e-4);
        let w = Window::new(2, 6).unwrap();
        let k = constants(&WeightFn::One, &w, 1, 1).unwrap();
        assert!((k.xi - (2.0 / 6.0 + 2.0 / 56.0)).abs() < 1e-12);
        let k = constants(&WeightFn::Identity, &Window::new(1, 2).unwrap(), 1, 1).unwrap();
        assert!((k.a - 0.636).abs() < 1e-3);
        assert!((k.b - k.a - 1.0).abs() < 1e-12);
        assert!((k.c - 10.0 / k.b).abs() < 1e-12);
        let zeros = WeightFn::table(1, vec![ExactRational::zero(); 3]).unwrap();
        let err = constants(&zeros, &Window::new(1, 3).unwrap(), 1, 1);
        assert!(matches!(err, Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn harness_small() {
        let t3 = thm_harness_with(10, &Theorem::T3 { b: 1, c: 1 }, 1).unwrap();
        assert_eq!(t3.mean, Some(0.5));
        let t = 9.0 / 10f64.ln();
        let t2 = thm_harness_with(10, &Theorem::T2 { ts: vec![t] }, 1).unwrap();
        assert_eq!(t2.rows[0].fraction, 0.5);
        let t1 = thm_harness_with(10, &Theorem::T1 { ts: vec![1e6] }, 1).unwrap();
        assert_eq!(t1.rows[0].fraction, 0.0);
        assert!(thm_harness_with(2, &Theorem::T1 { ts: vec![1.0] }, 1).is_err());
    }

    #[test]
    fn panov_examples() {
        let p = panov_mean_report_with(10, 1).unwrap();
        assert_eq!(p.mean, ExactRational::from(8u64));
        assert!((p.target - 3.224).abs() < 1e-3);
        assert!((p.ratio - 2.48).abs() < 1e-2);
        assert_eq!(panov_mean_report_with(2, 1).unwrap().mean, ExactRational::from(2u64));
    }
}
