//! Exact one-dimensional discrepancy of finite point multisets, and a
//! Koksma-type inequality for rational step functions.

use serde::Serialize;

use crate::arith::coprime_residues;
use crate::cf::{WeightFn, Window};
use crate::error::{Error, Result};
use crate::rational::ExactRational;
use crate::weight::{interval_i, interval_i_prime, interval_left, IntervalQ};

/// A sorted multiset of rationals in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<ExactRational>,
}

impl PointSet {
    pub fn new(mut points: Vec<ExactRational>) -> Result<Self> {
        let (zero, one) = (ExactRational::zero(), ExactRational::one());
        if let Some(bad) = points.iter().find(|x| **x < zero || **x > one) {
            return Err(Error::BadRange(format!("point {bad} is outside [0, 1]")));
        }
        points.sort();
        Ok(PointSet { points })
    }

    /// `{a/N : a ∈ ℤ_N*}`.
    pub fn reduced_fractions(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadRange(format!("need N >= 2, got {n}")));
        }
        let points = coprime_residues(n).map(|a| ExactRational::new(a, n)).collect();
        Ok(PointSet { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ExactRational] {
        &self.points
    }

    fn size(&self) -> Result<ExactRational> {
        if self.points.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(ExactRational::from(self.points.len() as u64))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscrepancyReport {
    pub value: ExactRational,
    pub witness: IntervalQ,
}

/// `|count(I)/M - λ(I)|` for one interval.
pub fn local_discrepancy(ps: &PointSet, interval: &IntervalQ) -> Result<ExactRational> {
    let m = ps.size()?;
    let count = ps.points.iter().filter(|x| interval.contains(x)).count() as u64;
    Ok((ExactRational::from(count) / m - interval.measure()).abs())
}

/// Star discrepancy `sup_t |#{x < t}/M - t|`, by the sorted sweep
/// `max_i max(i/M - x_(i), x_(i) - (i-1)/M)`.
pub fn star_discrepancy(ps: &PointSet) -> Result<DiscrepancyReport> {
    let m = ps.size()?;
    let zero = ExactRational::zero();
    let mut best = (zero.clone(), IntervalQ::closed(zero.clone(), zero.clone())?);
    for (i, x) in ps.points.iter().enumerate() {
        let i = ExactRational::from(i as u64);
        // [0, x] holds at least i + 1 points
        let over = (&i + &ExactRational::one()) / m.clone() - x;
        if over > best.0 {
            best = (over, IntervalQ::closed(zero.clone(), x.clone())?);
        }
        // [0, x) holds at most i points
        let under = x - &(i / m.clone());
        if under > best.0 {
            best = (under, IntervalQ::new(zero.clone(), x.clone(), true, false)?);
        }
    }
    Ok(DiscrepancyReport { value: best.0, witness: best.1 })
}

/// `sup_{I ⊆ range} |count(I)/M - λ(I)|` over all subintervals of `range`,
/// open, closed or half-open.
///
/// The excess `count/M - λ` is maximised by a closed interval `[y_i, y_j]`
/// between points of the range; the deficit `λ - count/M` by an open interval
/// whose ends are range ends or points. Both sides are single sweeps.
pub fn extreme_discrepancy(ps: &PointSet, range: &IntervalQ) -> Result<DiscrepancyReport> {
    let m = ps.size()?;
    if range.lo == range.hi {
        return Err(Error::BadRange(format!("range {range} has measure zero")));
    }
    let inside: Vec<&ExactRational> = ps.points.iter().filter(|x| range.contains(x)).collect();
    let step = ExactRational::one() / m;

    // deficit: candidates are the range ends and the distinct points
    let mut cands: Vec<(ExactRational, u64, u64)> = Vec::with_capacity(inside.len() + 2);
    {
        // (value, #points < value, #points <= value)
        let mut values: Vec<&ExactRational> = Vec::with_capacity(inside.len() + 2);
        values.push(&range.lo);
        values.extend(inside.iter().copied());
        values.push(&range.hi);
        values.sort();
        values.dedup();
        let mut below = 0usize;
        for v in values {
            while below < inside.len() && inside[below] < v {
                below += 1;
            }
            let mut upto = below;
            while upto < inside.len() && inside[upto] == v {
                upto += 1;
            }
            cands.push((v.clone(), below as u64, upto as u64));
        }
    }
    let mut deficit: Option<(ExactRational, usize, usize)> = None;
    // min over earlier α of α - G(α)/M
    let mut min_left: Option<(ExactRational, usize)> = None;
    for (t, (beta, lt, _)) in cands.iter().enumerate() {
        if let Some((low, s)) = &min_left {
            let val = beta - &(ExactRational::from(*lt) * step.clone()) - low;
            if deficit.as_ref().is_none_or(|d| val > d.0) {
                deficit = Some((val, *s, t));
            }
        }
        let (alpha, _, le) = &cands[t];
        let key = alpha - &(ExactRational::from(*le) * step.clone());
        if min_left.as_ref().is_none_or(|(low, _)| key < *low) {
            min_left = Some((key, t));
        }
    }
    let deficit = deficit.expect("range has two distinct ends");
    let mut best = DiscrepancyReport {
        value: deficit.0,
        witness: IntervalQ::open(cands[deficit.1].0.clone(), cands[deficit.2].0.clone())?,
    };

    // excess over [y_i, y_j]: (j + 1)/M - y_j + max_{i <= j} (y_i - i/M)
    let mut max_left: Option<(ExactRational, usize)> = None;
    for (j, y) in inside.iter().enumerate() {
        let key = *y - &(ExactRational::from(j as u64) * step.clone());
        if max_left.as_ref().is_none_or(|(high, _)| key > *high) {
            max_left = Some((key, j));
        }
        let (high, i) = max_left.as_ref().expect("just set");
        let val = ExactRational::from(j as u64 + 1) * step.clone() - *y + high;
        if val > best.value {
            best = DiscrepancyReport {
                value: val,
                witness: IntervalQ::closed(inside[*i].clone(), (*y).clone())?,
            };
        }
    }
    Ok(best)
}

/// Extreme discrepancy of `{a/N : a ∈ ℤ_N*}` over subintervals of `range`.
pub fn reduced_fraction_discrepancy(n: u64, range: &IntervalQ) -> Result<DiscrepancyReport> {
    extreme_discrepancy(&PointSet::reduced_fractions(n)?, range)
}

/// A function on `[0, 1]` that is constant on finitely many pairwise disjoint
/// rational intervals and zero elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepFunction {
    pieces: Vec<(IntervalQ, ExactRational)>,
}

impl StepFunction {
    pub fn new(mut pieces: Vec<(IntervalQ, ExactRational)>) -> Result<Self> {
        pieces.retain(|(_, v)| !v.is_zero());
        pieces.sort_by(|a, b| (&a.0.lo, !a.0.lo_closed).cmp(&(&b.0.lo, !b.0.lo_closed)));
        for pair in pieces.windows(2) {
            let (a, b) = (&pair[0].0, &pair[1].0);
            if a.hi > b.lo || (a.hi == b.lo && a.hi_closed && b.lo_closed) {
                return Err(Error::BadSpec(format!("pieces {a} and {b} overlap")));
            }
        }
        Ok(StepFunction { pieces })
    }

    pub fn zero() -> Self {
        StepFunction { pieces: Vec::new() }
    }

    /// `Σ v · 1_I` over possibly overlapping pieces, refined into disjoint
    /// cells: each endpoint as a point and each open gap between endpoints.
    pub fn from_sum(pieces: Vec<(IntervalQ, ExactRational)>) -> Result<Self> {
        let mut breaks: Vec<ExactRational> =
            pieces.iter().flat_map(|(i, _)| [i.lo.clone(), i.hi.clone()]).collect();
        breaks.sort();
        breaks.dedup();
        let value_at = |x: &ExactRational| -> ExactRational {
            pieces.iter().filter(|(i, _)| i.contains(x)).map(|(_, v)| v.clone()).sum()
        };
        let two = ExactRational::from(2u64);
        let mut cells = Vec::with_capacity(2 * breaks.len());
        for (j, x) in breaks.iter().enumerate() {
            cells.push((IntervalQ::closed(x.clone(), x.clone())?, value_at(x)));
            if let Some(next) = breaks.get(j + 1) {
                let mid = (x + next) / two.clone();
                cells.push((IntervalQ::open(x.clone(), next.clone())?, value_at(&mid)));
            }
        }
        Self::new(cells)
    }

    /// `x ↦ w_{f,η,θ}(b/k, x)`.
    pub fn from_weight(b: u64, k: u64, f: &WeightFn, w: &Window) -> Result<Self> {
        f.validate(w)?;
        let theta = w.finite_theta()?;
        let mut pieces = Vec::new();
        for m in w.eta()..=theta {
            let v = f.value(m);
            pieces.push((interval_i(b, k, m)?, v.clone()));
            pieces.push((interval_i_prime(b, k, m)?, v));
        }
        // for k = 1 the two families overlap: x = [0; 1, m, ...] lies in both
        Self::from_sum(pieces)
    }

    /// The one-sided weight `x ↦ Σ_m f(m) 1_{I_left(b/k, m)}(x)`.
    pub fn from_weight_left(b: u64, k: u64, f: &WeightFn, w: &Window) -> Result<Self> {
        f.validate(w)?;
        let theta = w.finite_theta()?;
        let pieces = (w.eta()..=theta)
            .map(|m| Ok((interval_left(b, k, m)?, f.value(m))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pieces)
    }

    pub fn pieces(&self) -> &[(IntervalQ, ExactRational)] {
        &self.pieces
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        self.pieces
            .iter()
            .find(|(i, _)| i.contains(x))
            .map(|(_, v)| v.clone())
            .unwrap_or_else(ExactRational::zero)
    }

    pub fn integral(&self) -> ExactRational {
        self.pieces.iter().map(|(i, v)| i.measure() * v).sum()
    }

    /// Smallest closed interval outside which the function vanishes.
    pub fn support_hull(&self) -> Option<IntervalQ> {
        let lo = self.pieces.iter().map(|(i, _)| &i.lo).min()?;
        let hi = self.pieces.iter().map(|(i, _)| &i.hi).max()?;
        IntervalQ::closed(lo.clone(), hi.clone()).ok()
    }

    /// Total variation `V(g; [0, 1])`: the function is sampled at every
    /// breakpoint and inside every gap between consecutive breakpoints.
    pub fn variation(&self) -> ExactRational {
        let mut breaks: Vec<ExactRational> = vec![ExactRational::zero(), ExactRational::one()];
        for (i, _) in &self.pieces {
            breaks.push(i.lo.clone());
            breaks.push(i.hi.clone());
        }
        breaks.sort();
        breaks.dedup();
        let two = ExactRational::from(2u64);
        let mut samples = vec![self.eval(&breaks[0])];
        for pair in breaks.windows(2) {
            let mid = (&pair[0] + &pair[1]) / two.clone();
            samples.push(self.eval(&mid));
            samples.push(self.eval(&pair[1]));
        }
        samples.windows(2).map(|p| (&p[1] - &p[0]).abs()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoksmaReport {
    /// `|(1/M) Σ g(x_m) - ∫ g|`
    pub error: ExactRational,
    pub variation: ExactRational,
    pub discrepancy: ExactRational,
    pub holds: bool,
}

/// Evaluates both sides of `|(1/M) Σ g(x_m) - ∫g| ≤ V(g) · D_{[c,d]}(x)`, where
/// `[c, d]` is the support hull of `g`.
pub fn koksma_report(g: &StepFunction, ps: &PointSet) -> Result<KoksmaReport> {
    let m = ps.size()?;
    let mean: ExactRational = ps.points.iter().map(|x| g.eval(x)).sum::<ExactRational>() / m;
    let error = (mean - g.integral()).abs();
    let variation = g.variation();
    let discrepancy = match g.support_hull() {
        Some(range) if range.lo < range.hi => extreme_discrepancy(ps, &range)?.value,
        _ => ExactRational::zero(),
    };
    let holds = error <= &variation * &discrepancy;
    Ok(KoksmaReport { error, variation, discrepancy, holds })
}

pub fn koksma_check(g: &StepFunction, ps: &PointSet) -> Result<bool> {
    Ok(koksma_report(g, ps)?.holds)
}
