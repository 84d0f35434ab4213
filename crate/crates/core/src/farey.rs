//! The Farey fractions `F_Q` (reduced `a/N` in `(0, 1)` with `N ≤ Q`) and
//! their comparison with averaged limit laws.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::totient;
use crate::cf::ReducedFraction;
use crate::ensemble::TWELVE_OVER_PI_SQ;
use crate::error::{Error, Result};

/// Largest order accepted; the recurrence works in `u64`.
pub const MAX_ORDER: u64 = 1 << 31;

/// Farey fractions of order `q` in increasing order, without `0/1` and `1/1`.
pub struct FareyIter {
    order: u64,
    a: u64,
    b: u64,
    c: u64,
    d: u64,
}

impl Iterator for FareyIter {
    type Item = ReducedFraction;

    fn next(&mut self) -> Option<ReducedFraction> {
        if self.c >= self.d {
            return None;
        }
        let out = ReducedFraction::new_unchecked(self.c, self.d);
        // successor of c/d given its predecessor a/b
        let k = (self.order + self.b) / self.d;
        (self.a, self.b, self.c, self.d) = (self.c, self.d, k * self.c - self.a, k * self.d - self.b);
        Some(out)
    }
}

pub fn enumerate_farey(q: u64) -> Result<FareyIter> {
    if q < 2 {
        return Err(Error::BadRange(format!("need Q >= 2, got {q}")));
    }
    if q > MAX_ORDER {
        return Err(Error::NotSupported(format!("Farey order {q} exceeds 2^31")));
    }
    Ok(FareyIter { order: q, a: 0, b: 1, c: 1, d: q })
}

/// `|F_Q| = Σ_{N=2}^{Q} φ(N)`.
pub fn farey_count(q: u64) -> u64 {
    (2..=q).map(totient).sum()
}

/// Members with `N ≥ 3`, the ones every `ln N`-normalized statistic uses.
fn scaled_members(q: u64) -> Result<Vec<ReducedFraction>> {
    Ok(enumerate_farey(q)?.filter(|f| f.denominator() >= 3).collect())
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Error::BadRange("workers must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::NotSupported(format!("cannot start worker pool: {e}")))
}

fn max_digit(frac: &ReducedFraction) -> u64 {
    frac.digits().max().unwrap_or(0)
}

fn digit_sum(frac: &ReducedFraction) -> u64 {
    frac.digits().sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailReport {
    pub q: u64,
    pub members: u64,
    pub t: f64,
    pub count: u64,
    pub fraction: f64,
    /// `1 − e^{−12/(π² t)}` for the Hensley law; `t · fraction` for the S tail.
    pub reference: f64,
}

/// `1 − e^{−12/(π² t)}`
pub fn hensley_limit(t: f64) -> f64 {
    -(-TWELVE_OVER_PI_SQ / t).exp_m1()
}

/// Fraction of `F_Q` members (`N ≥ 3`) with `M(a/N) ≥ t ln N`, one report per `t`.
pub fn hensley_tails(q: u64, ts: &[f64], workers: usize) -> Result<Vec<TailReport>> {
    if q < 3 {
        return Err(Error::BadRange(format!("need Q >= 3, got {q}")));
    }
    if let Some(t) = ts.iter().find(|t| t.is_nan() || **t <= 0.0) {
        return Err(Error::BadRange(format!("need t > 0, got {t}")));
    }
    let members = scaled_members(q)?;
    let counts = count_tails(&members, ts, workers, |f| {
        (max_digit(f) as f64, (f.denominator() as f64).ln())
    })?;
    Ok(ts
        .iter()
        .zip(counts)
        .map(|(&t, count)| TailReport {
            q,
            members: members.len() as u64,
            t,
            count,
            fraction: count as f64 / members.len() as f64,
            reference: hensley_limit(t),
        })
        .collect())
}

pub fn hensley_tail(q: u64, t: f64) -> Result<TailReport> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    Ok(hensley_tails(q, &[t], workers)?.remove(0))
}

/// Counts members with `value ≥ t · scale` for each `t`, where
/// `stat` returns `(value, scale)`.
fn count_tails<F>(members: &[ReducedFraction], ts: &[f64], workers: usize, stat: F) -> Result<Vec<u64>>
where
    F: Fn(&ReducedFraction) -> (f64, f64) + Sync,
{
    let pool = pool(workers)?;
    let zero = || vec![0u64; ts.len()];
    Ok(pool.install(|| {
        members
            .par_chunks(4096)
            .map(|chunk| {
                let mut c = zero();
                for f in chunk {
                    let (v, s) = stat(f);
                    for (slot, t) in c.iter_mut().zip(ts) {
                        if v >= t * s {
                            *slot += 1;
                        }
                    }
                }
                c
            })
            .reduce(zero, |mut x, y| {
                x.iter_mut().zip(&y).for_each(|(a, b)| *a += b);
                x
            })
    }))
}

/// Fraction of members (`N ≥ 3`) with `(S − (12/π²) ln N ln ln N)/ln N ≥ t`,
/// paired with `t · fraction`.
pub fn bd_tails(q: u64, ts: &[f64], workers: usize) -> Result<Vec<TailReport>> {
    if q < 16 {
        return Err(Error::BadRange(format!("need Q >= 16, got {q}")));
    }
    let members = scaled_members(q)?;
    let counts = count_tails(&members, ts, workers, |f| {
        let ln_n = (f.denominator() as f64).ln();
        let centered = digit_sum(f) as f64 - TWELVE_OVER_PI_SQ * ln_n * ln_n.ln();
        (centered / ln_n, 1.0)
    })?;
    Ok(ts
        .iter()
        .zip(counts)
        .map(|(&t, count)| {
            let fraction = count as f64 / members.len() as f64;
            TailReport { q, members: members.len() as u64, t, count, fraction, reference: t * fraction }
        })
        .collect())
}

pub fn bd_tail(q: u64, t: f64) -> Result<TailReport> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    Ok(bd_tails(q, &[t], workers)?.remove(0))
}

/// Standard Cauchy CDF `1/2 + arctan(x)/π`.
pub fn cauchy_cdf(x: f64) -> f64 {
    0.5 + x.atan() / PI
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CdfProbe {
    pub x: f64,
    pub empirical: f64,
    pub cauchy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VardiReport {
    pub q: u64,
    pub members: u64,
    pub probes: Vec<CdfProbe>,
    /// `sup_x |F_emp(x) − F_Cauchy(x)|`
    pub sup_distance: f64,
}

pub const VARDI_PROBES: [f64; 7] = [-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0];

/// Normalized Dedekind sums `2π D(a/N) / ln N` over members with `N ≥ 3`, in
/// enumeration order.
pub fn vardi_sample(q: u64, workers: usize) -> Result<Vec<f64>> {
    if q < 3 {
        return Err(Error::BadRange(format!("need Q >= 3, got {q}")));
    }
    let members = scaled_members(q)?;
    let pool = pool(workers)?;
    Ok(pool.install(|| {
        members
            .par_iter()
            .map(|f| {
                let d = crate::dedekind::dedekind_bh(*f).to_f64();
                2.0 * PI * d / (f.denominator() as f64).ln()
            })
            .collect()
    }))
}

/// Empirical CDF of [`vardi_sample`] against the standard Cauchy law. Report only.
pub fn vardi_report(q: u64, workers: usize) -> Result<VardiReport> {
    let mut xs = vardi_sample(q, workers)?;
    xs.sort_by(f64::total_cmp);
    let m = xs.len() as f64;
    let below_or_at = |x: f64| xs.partition_point(|v| *v <= x) as f64 / m;
    let probes = VARDI_PROBES
        .iter()
        .map(|&x| CdfProbe { x, empirical: below_or_at(x), cauchy: cauchy_cdf(x) })
        .collect();
    let mut sup: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let c = cauchy_cdf(x);
        sup = sup.max((c - i as f64 / m).abs()).max(((i + 1) as f64 / m - c).abs());
    }
    Ok(VardiReport { q, members: xs.len() as u64, probes, sup_distance: sup })
}
