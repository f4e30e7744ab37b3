//! Dual-objective benchmark problems and samplers for their analytic
//! Pareto-optimal fronts.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Bounds, DecisionVector, ObjectiveVector};

/// Reference-front sample size used for metric computation.
pub const REFERENCE_FRONT_SIZE: usize = 1000;

/// f1 intervals of ZDT3's disconnected Pareto-optimal front.
pub const ZDT3_SEGMENTS: [(f64, f64); 5] = [
    (0.0, 0.083_001_534_9),
    (0.182_228_728_0, 0.257_762_363_4),
    (0.409_313_674_8, 0.453_882_104_1),
    (0.618_396_794_4, 0.652_511_703_8),
    (0.823_331_798_3, 0.851_832_865_4),
];

/// Smallest attainable f1 of ZDT6, reached at x1 = 0.0817...
pub const ZDT6_MIN_F1: f64 = 0.280_775_319_1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemId {
    Zdt1,
    Zdt2,
    Zdt3,
    Zdt4,
    Zdt6,
    Sch,
    Fon,
}

impl ProblemId {
    pub const ALL: [ProblemId; 7] = [
        ProblemId::Zdt1,
        ProblemId::Zdt2,
        ProblemId::Zdt3,
        ProblemId::Zdt4,
        ProblemId::Zdt6,
        ProblemId::Sch,
        ProblemId::Fon,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemId::Zdt1 => "zdt1",
            ProblemId::Zdt2 => "zdt2",
            ProblemId::Zdt3 => "zdt3",
            ProblemId::Zdt4 => "zdt4",
            ProblemId::Zdt6 => "zdt6",
            ProblemId::Sch => "sch",
            ProblemId::Fon => "fon",
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

/// A benchmark instance: identifier, dimension and box bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    id: ProblemId,
    bounds: Bounds,
}

impl ProblemSpec {
    /// The canonical instance of `id`.
    pub fn new(id: ProblemId) -> Self {
        let (lower, upper) = match id {
            ProblemId::Zdt1 | ProblemId::Zdt2 | ProblemId::Zdt3 => (vec![0.0; 30], vec![1.0; 30]),
            ProblemId::Zdt4 => {
                let mut lower = vec![-5.0; 10];
                let mut upper = vec![5.0; 10];
                lower[0] = 0.0;
                upper[0] = 1.0;
                (lower, upper)
            }
            ProblemId::Zdt6 => (vec![0.0; 10], vec![1.0; 10]),
            ProblemId::Sch => (vec![-1000.0], vec![1000.0]),
            ProblemId::Fon => (vec![-4.0; 3], vec![4.0; 3]),
        };
        Self {
            id,
            bounds: Bounds::new(lower, upper).expect("canonical bounds are valid"),
        }
    }

    pub fn id(&self) -> ProblemId {
        self.id
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn num_objectives(&self) -> usize {
        2
    }

    /// Evaluates both objectives at an in-bounds decision vector.
    pub fn evaluate(&self, x: &DecisionVector) -> Result<ObjectiveVector> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: x.len(),
            });
        }
        for (index, (&value, (lo, hi))) in x.iter().zip(self.bounds.iter()).enumerate() {
            if !(value >= lo && value <= hi) {
                return Err(Error::OutOfBounds {
                    index,
                    value,
                    lo,
                    hi,
                });
            }
        }
        let (f1, f2) = match self.id {
            ProblemId::Zdt1 => zdt_convex(x, |r| 1.0 - r.sqrt()),
            ProblemId::Zdt2 => zdt_convex(x, |r| 1.0 - r * r),
            ProblemId::Zdt3 => {
                let f1 = x[0];
                zdt_convex(x, |r| 1.0 - r.sqrt() - r * (10.0 * PI * f1).sin())
            }
            ProblemId::Zdt4 => {
                let f1 = x[0];
                let g = 1.0
                    + 10.0 * (x.len() - 1) as f64
                    + x[1..]
                        .iter()
                        .map(|&v| v * v - 10.0 * (4.0 * PI * v).cos())
                        .sum::<f64>();
                (f1, g * (1.0 - (f1 / g).sqrt()))
            }
            ProblemId::Zdt6 => {
                let x1 = x[0];
                let f1 = 1.0 - (-4.0 * x1).exp() * (6.0 * PI * x1).sin().powi(6);
                let mean = x[1..].iter().sum::<f64>() / (x.len() - 1) as f64;
                let g = 1.0 + 9.0 * mean.powf(0.25);
                (f1, g * (1.0 - (f1 / g).powi(2)))
            }
            ProblemId::Sch => {
                let v = x[0];
                (v * v, (v - 2.0) * (v - 2.0))
            }
            ProblemId::Fon => {
                let c = 1.0 / 3f64.sqrt();
                let s1: f64 = x.iter().map(|&v| (v - c) * (v - c)).sum();
                let s2: f64 = x.iter().map(|&v| (v + c) * (v + c)).sum();
                (1.0 - (-s1).exp(), 1.0 - (-s2).exp())
            }
        };
        Ok(ObjectiveVector(vec![f1, f2]))
    }

    /// `k` points on the analytic Pareto-optimal front, evenly spaced in the
    /// front's parameterization with both endpoints included, ordered by
    /// increasing f1. ZDT3 samples only its optimal segments.
    pub fn true_front_sample(&self, k: usize) -> Result<Vec<ObjectiveVector>> {
        if k < 2 {
            return Err(Error::TooFewPoints {
                what: "true front sample",
                min: 2,
                found: k,
            });
        }
        let t = |i: usize| i as f64 / (k - 1) as f64;
        let points: Vec<[f64; 2]> = match self.id {
            ProblemId::Zdt1 | ProblemId::Zdt4 => (0..k)
                .map(|i| {
                    let f1 = t(i);
                    [f1, 1.0 - f1.sqrt()]
                })
                .collect(),
            ProblemId::Zdt2 => (0..k)
                .map(|i| {
                    let f1 = t(i);
                    [f1, 1.0 - f1 * f1]
                })
                .collect(),
            ProblemId::Zdt3 => {
                let total: f64 = ZDT3_SEGMENTS.iter().map(|(a, b)| b - a).sum();
                (0..k)
                    .map(|i| {
                        let f1 = zdt3_position(t(i) * total);
                        [f1, 1.0 - f1.sqrt() - f1 * (10.0 * PI * f1).sin()]
                    })
                    .collect()
            }
            ProblemId::Zdt6 => (0..k)
                .map(|i| {
                    let f1 = ZDT6_MIN_F1 + (1.0 - ZDT6_MIN_F1) * t(i);
                    [f1, 1.0 - f1 * f1]
                })
                .collect(),
            ProblemId::Sch => (0..k)
                .map(|i| {
                    let x = 2.0 * t(i);
                    [x * x, (x - 2.0) * (x - 2.0)]
                })
                .collect(),
            ProblemId::Fon => {
                // Increasing f1 means s runs from +1/sqrt(3) down to -1/sqrt(3).
                let c = 1.0 / 3f64.sqrt();
                (0..k)
                    .map(|i| {
                        let s = c - 2.0 * c * t(i);
                        [
                            1.0 - (-3.0 * (s - c) * (s - c)).exp(),
                            1.0 - (-3.0 * (s + c) * (s + c)).exp(),
                        ]
                    })
                    .collect()
            }
        };
        Ok(points
            .into_iter()
            .map(|p| ObjectiveVector(p.to_vec()))
            .collect())
    }

    /// A decision vector whose image lies on the Pareto-optimal front, for the
    /// front parameter `t` in [0, 1] (ZDT3 and ZDT6 map `t` onto x1 directly,
    /// which may land on a dominated part of their f1 range).
    pub fn pareto_set_point(&self, t: f64) -> DecisionVector {
        let t = t.clamp(0.0, 1.0);
        let mut x = vec![0.0; self.dimension()];
        match self.id {
            ProblemId::Zdt1
            | ProblemId::Zdt2
            | ProblemId::Zdt3
            | ProblemId::Zdt4
            | ProblemId::Zdt6 => x[0] = t,
            ProblemId::Sch => x[0] = 2.0 * t,
            ProblemId::Fon => {
                let c = 1.0 / 3f64.sqrt();
                x.iter_mut().for_each(|v| *v = -c + 2.0 * c * t);
            }
        }
        DecisionVector(x)
    }
}

fn zdt_convex(x: &[f64], h: impl Fn(f64) -> f64) -> (f64, f64) {
    let f1 = x[0];
    let g = 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (x.len() - 1) as f64;
    (f1, g * h(f1 / g))
}

/// Maps an arc position along the concatenated ZDT3 segments back to f1.
fn zdt3_position(mut offset: f64) -> f64 {
    for &(a, b) in &ZDT3_SEGMENTS {
        let len = b - a;
        if offset <= len {
            return a + offset;
        }
        offset -= len;
    }
    ZDT3_SEGMENTS[ZDT3_SEGMENTS.len() - 1].1
}
