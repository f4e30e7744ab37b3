use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::ProblemSpec;

/// Point in decision space, one value per decision variable.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DecisionVector(pub Vec<f64>);

/// Point in objective space. Every objective is minimized.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveVector(pub Vec<f64>);

macro_rules! vector_newtype {
    ($name:ident) => {
        impl Deref for $name {
            type Target = [f64];

            fn deref(&self) -> &[f64] {
                &self.0
            }
        }

        impl DerefMut for $name {
            fn deref_mut(&mut self) -> &mut [f64] {
                &mut self.0
            }
        }

        impl From<Vec<f64>> for $name {
            fn from(values: Vec<f64>) -> Self {
                Self(values)
            }
        }

        impl<const N: usize> From<[f64; N]> for $name {
            fn from(values: [f64; N]) -> Self {
                Self(values.to_vec())
            }
        }

        impl AsRef<[f64]> for $name {
            fn as_ref(&self) -> &[f64] {
                &self.0
            }
        }
    };
}

vector_newtype!(DecisionVector);
vector_newtype!(ObjectiveVector);

/// Per-variable box bounds `[lower[i], upper[i]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        for (index, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(Error::InvalidBounds { index, lo, hi });
            }
        }
        Ok(Self { lower, upper })
    }

    /// Builds bounds from `[lo, hi]` pairs.
    pub fn from_pairs(pairs: &[[f64; 2]]) -> Result<Self> {
        Self::new(
            pairs.iter().map(|p| p[0]).collect(),
            pairs.iter().map(|p| p[1]).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn get(&self, index: usize) -> (f64, f64) {
        (self.lower[index], self.upper[index])
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.lower.iter().copied().zip(self.upper.iter().copied())
    }

    /// Total amount by which `x` exceeds the box, summed over variables.
    pub fn violation(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(self.iter())
            .map(|(&v, (lo, hi))| (lo - v).max(0.0) + (v - hi).max(0.0))
            .sum()
    }

    pub(crate) fn clamp_in_place(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.iter()) {
            *v = v.clamp(lo, hi);
        }
    }
}

/// Projects every variable of `x` onto its `[lo, hi]` interval.
pub fn clamp_to_bounds(x: &DecisionVector, bounds: &Bounds) -> Result<DecisionVector> {
    if x.len() != bounds.len() {
        return Err(Error::DimensionMismatch {
            expected: bounds.len(),
            found: x.len(),
        });
    }
    let mut out = x.clone();
    bounds.clamp_in_place(&mut out);
    Ok(out)
}

/// An evaluated individual.
///
/// `rank` and `crowding` are only meaningful after a sorting pass has stamped
/// them; fresh solutions carry rank 0 and zero crowding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub decision: DecisionVector,
    pub objectives: ObjectiveVector,
    pub rank: usize,
    #[serde(with = "infinite_f64")]
    pub crowding: f64,
    /// Total constraint violation; zero for the box-bounded benchmarks once
    /// decisions have been clamped.
    pub violation: f64,
}

impl Solution {
    /// Evaluates `decision` under `problem`.
    pub fn evaluate(problem: &ProblemSpec, decision: DecisionVector) -> Result<Self> {
        let objectives = problem.evaluate(&decision)?;
        Ok(Self::with_objectives(decision, objectives))
    }

    /// Clamps `decision` into the problem's bounds and evaluates it.
    pub fn repaired(problem: &ProblemSpec, mut decision: DecisionVector) -> Result<Self> {
        if decision.len() != problem.dimension() {
            return Err(Error::DimensionMismatch {
                expected: problem.dimension(),
                found: decision.len(),
            });
        }
        problem.bounds().clamp_in_place(&mut decision);
        Self::evaluate(problem, decision)
    }

    pub fn with_objectives(decision: DecisionVector, objectives: ObjectiveVector) -> Self {
        Self {
            decision,
            objectives,
            rank: 0,
            crowding: 0.0,
            violation: 0.0,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.violation <= 0.0
    }
}

/// JSON has no representation for infinity, so boundary crowding values are
/// written as `null`.
mod infinite_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
        if value.is_finite() {
            serializer.serialize_f64(*value)
        } else {
            serializer.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(deserializer)?.unwrap_or(f64::INFINITY))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds(pairs: &[[f64; 2]]) -> Bounds {
        Bounds::from_pairs(pairs).unwrap()
    }

    #[test]
    fn clamp_above() {
        let out = clamp_to_bounds(&[1.2].into(), &bounds(&[[0.0, 1.0]])).unwrap();
        assert_eq!(out.0, vec![1.0]);
    }

    #[test]
    fn clamp_identity() {
        let out = clamp_to_bounds(&[0.5].into(), &bounds(&[[0.0, 1.0]])).unwrap();
        assert_eq!(out.0, vec![0.5]);
    }

    #[test]
    fn clamp_below() {
        let out =
            clamp_to_bounds(&[-6.1, 0.3].into(), &bounds(&[[-5.0, 5.0], [0.0, 1.0]])).unwrap();
        assert_eq!(out.0, vec![-5.0, 0.3]);
    }

    #[test]
    fn clamp_dimension_mismatch() {
        let err = clamp_to_bounds(&[0.1, 0.2].into(), &bounds(&[[0.0, 1.0]])).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 1,
                found: 2
            }
        );
    }

    #[test]
    fn inverted_bounds_rejected() {
        assert!(matches!(
            Bounds::from_pairs(&[[1.0, 0.0]]),
            Err(Error::InvalidBounds { index: 0, .. })
        ));
    }

    #[test]
    fn violation_sums_excess() {
        let b = bounds(&[[0.0, 1.0], [0.0, 1.0]]);
        assert!((b.violation(&[1.5, -0.25]) - 0.75).abs() < 1e-15);
        assert_eq!(b.violation(&[0.5, 0.5]), 0.0);
    }

    #[test]
    fn infinite_crowding_survives_json() {
        let mut s = Solution::with_objectives([0.5].into(), [1.0, 2.0].into());
        s.crowding = f64::INFINITY;
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"crowding\":null"));
        let back: Solution = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
