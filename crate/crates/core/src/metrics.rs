//! Front quality indicators and run aggregation.
//!
//! * γ (convergence): mean distance from each obtained point to its nearest
//!   reference point.
//! * IGD: mean distance from each reference point to its nearest obtained
//!   point.
//! * Δ (diversity): `(d_f + d_l + Σ|d_i - d̄|) / (d_f + d_l + (N-1) d̄)` over
//!   consecutive gaps `d_i` of the front sorted by f1, with `d_f`, `d_l` the
//!   distances between the front's and the reference front's extreme points.
//! * SPREAD: the same ratio with `d_i` taken as each point's nearest-neighbour
//!   distance (N terms) and the extreme terms measured from each reference
//!   extreme to its nearest obtained point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::ObjectiveVector;

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn nearest(point: &[f64], set: &[ObjectiveVector]) -> f64 {
    set.iter()
        .map(|q| euclid(point, q))
        .fold(f64::INFINITY, f64::min)
}

fn non_empty(what: &'static str, set: &[ObjectiveVector]) -> Result<()> {
    if set.is_empty() {
        Err(Error::EmptyInput(what))
    } else {
        Ok(())
    }
}

fn mean_nearest(from: &[ObjectiveVector], to: &[ObjectiveVector]) -> f64 {
    from.iter().map(|p| nearest(p, to)).sum::<f64>() / from.len() as f64
}

/// Convergence metric γ.
pub fn gamma(front: &[ObjectiveVector], reference: &[ObjectiveVector]) -> Result<f64> {
    non_empty("gamma", front)?;
    non_empty("gamma", reference)?;
    Ok(mean_nearest(front, reference))
}

/// Inverted generational distance.
pub fn igd(front: &[ObjectiveVector], reference: &[ObjectiveVector]) -> Result<f64> {
    non_empty("igd", front)?;
    non_empty("igd", reference)?;
    Ok(mean_nearest(reference, front))
}

fn sorted_by_f1(points: &[ObjectiveVector]) -> Vec<&ObjectiveVector> {
    let mut sorted: Vec<&ObjectiveVector> = points.iter().collect();
    sorted.sort_by(|a, b| {
        a[0].total_cmp(&b[0])
            .then_with(|| a[1..].iter().zip(&b[1..]).fold(std::cmp::Ordering::Equal, |o, (x, y)| o.then(x.total_cmp(y))))
    });
    sorted
}

fn check_front(what: &'static str, front: &[ObjectiveVector], reference: &[ObjectiveVector]) -> Result<()> {
    if front.len() < 2 {
        return Err(Error::TooFewPoints {
            what,
            min: 2,
            found: front.len(),
        });
    }
    non_empty(what, reference)
}

fn ratio(extremes: f64, deviation: f64, spacing: f64) -> f64 {
    let denominator = extremes + spacing;
    if denominator > 0.0 {
        (extremes + deviation) / denominator
    } else {
        0.0
    }
}

/// Diversity metric Δ.
pub fn delta(front: &[ObjectiveVector], reference: &[ObjectiveVector]) -> Result<f64> {
    check_front("delta", front, reference)?;
    let front = sorted_by_f1(front);
    let reference = sorted_by_f1(reference);
    let d_f = euclid(front[0], reference[0]);
    let d_l = euclid(front[front.len() - 1], reference[reference.len() - 1]);
    let gaps: Vec<f64> = front.windows(2).map(|w| euclid(w[0], w[1])).collect();
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let deviation: f64 = gaps.iter().map(|d| (d - mean).abs()).sum();
    Ok(ratio(d_f + d_l, deviation, gaps.len() as f64 * mean))
}

/// Generalized spread.
pub fn spread(front: &[ObjectiveVector], reference: &[ObjectiveVector]) -> Result<f64> {
    check_front("spread", front, reference)?;
    let sorted_ref = sorted_by_f1(reference);
    let d_f = nearest(sorted_ref[0], front);
    let d_l = nearest(sorted_ref[sorted_ref.len() - 1], front);
    let neighbours: Vec<f64> = front
        .iter()
        .enumerate()
        .map(|(i, p)| {
            front
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| euclid(p, q))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mean = neighbours.iter().sum::<f64>() / neighbours.len() as f64;
    let deviation: f64 = neighbours.iter().map(|d| (d - mean).abs()).sum();
    Ok(ratio(d_f + d_l, deviation, neighbours.len() as f64 * mean))
}

/// Sample mean and standard deviation (divisor N-1; zero for a single value).
pub fn aggregate(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::EmptyInput("aggregate"));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Ok((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok((mean, var.sqrt()))
}

/// All four indicators for one front.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontMetrics {
    pub gamma: f64,
    pub delta: f64,
    pub igd: f64,
    pub spread: f64,
}

impl FrontMetrics {
    pub fn compute(front: &[ObjectiveVector], reference: &[ObjectiveVector]) -> Result<Self> {
        Ok(Self {
            gamma: gamma(front, reference)?,
            delta: delta(front, reference)?,
            igd: igd(front, reference)?,
            spread: spread(front, reference)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

/// Mean and standard deviation of each indicator over a set of runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub problem: String,
    pub algorithm: String,
    pub runs: usize,
    pub gamma: Summary,
    pub delta: Summary,
    pub igd: Summary,
    pub spread: Summary,
}

impl MetricReport {
    pub fn from_runs(problem: &str, algorithm: &str, runs: &[FrontMetrics]) -> Result<Self> {
        let summarize = |f: fn(&FrontMetrics) -> f64| -> Result<Summary> {
            let values: Vec<f64> = runs.iter().map(f).collect();
            let (mean, std) = aggregate(&values)?;
            Ok(Summary { mean, std })
        };
        Ok(Self {
            problem: problem.to_string(),
            algorithm: algorithm.to_string(),
            runs: runs.len(),
            gamma: summarize(|m| m.gamma)?,
            delta: summarize(|m| m.delta)?,
            igd: summarize(|m| m.igd)?,
            spread: summarize(|m| m.spread)?,
        })
    }
}
