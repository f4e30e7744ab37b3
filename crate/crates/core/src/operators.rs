//! Real-coded variation operators shared by the TBGA phase and NSGA-II.

use crate::problems::ProblemSpec;
use crate::rng::RngStream;
use crate::types::{DecisionVector, Solution};

/// Simulated binary crossover.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sbx {
    /// Distribution index η_c.
    pub eta: f64,
    /// Probability of recombining each variable.
    pub per_variable_prob: f64,
}

impl Default for Sbx {
    fn default() -> Self {
        Self {
            eta: 15.0,
            per_variable_prob: 0.5,
        }
    }
}

impl Sbx {
    /// Recombines two decision vectors. Children are not yet clamped.
    pub fn recombine(
        &self,
        p1: &[f64],
        p2: &[f64],
        rng: &mut RngStream,
    ) -> (DecisionVector, DecisionVector) {
        debug_assert_eq!(p1.len(), p2.len());
        let mut c1 = p1.to_vec();
        let mut c2 = p2.to_vec();
        for j in 0..p1.len() {
            if rng.unit() >= self.per_variable_prob {
                continue;
            }
            let (a, b) = (p1[j], p2[j]);
            if (a - b).abs() <= 1e-14 {
                continue;
            }
            let beta = self.spread_factor(rng.unit());
            let mid = 0.5 * (a + b);
            let half = 0.5 * beta * (b - a);
            c1[j] = mid - half;
            c2[j] = mid + half;
        }
        (DecisionVector(c1), DecisionVector(c2))
    }

    /// Spread factor β for a uniform draw `u` in [0, 1).
    pub fn spread_factor(&self, u: f64) -> f64 {
        let exponent = 1.0 / (self.eta + 1.0);
        if u <= 0.5 {
            (2.0 * u).powf(exponent)
        } else {
            (1.0 / (2.0 * (1.0 - u))).powf(exponent)
        }
    }

    /// Crosses two evaluated parents; children are clamped and evaluated.
    pub fn apply(
        &self,
        problem: &ProblemSpec,
        p1: &Solution,
        p2: &Solution,
        rng: &mut RngStream,
    ) -> (Solution, Solution) {
        let (c1, c2) = self.recombine(&p1.decision, &p2.decision, rng);
        (repair(problem, c1), repair(problem, c2))
    }
}

/// Bounded polynomial mutation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolynomialMutation {
    /// Distribution index η_m.
    pub eta: f64,
    /// Per-variable mutation probability; `None` means 1/d.
    pub per_variable_prob: Option<f64>,
}

impl Default for PolynomialMutation {
    fn default() -> Self {
        Self {
            eta: 20.0,
            per_variable_prob: None,
        }
    }
}

impl PolynomialMutation {
    pub fn perturb(&self, problem: &ProblemSpec, x: &[f64], rng: &mut RngStream) -> DecisionVector {
        let d = x.len();
        let prob = self.per_variable_prob.unwrap_or(1.0 / d as f64);
        let exponent = 1.0 / (self.eta + 1.0);
        let mut out = x.to_vec();
        for (j, v) in out.iter_mut().enumerate() {
            if rng.unit() >= prob {
                continue;
            }
            let (lo, hi) = problem.bounds().get(j);
            let range = hi - lo;
            if range <= 0.0 {
                continue;
            }
            let delta1 = (*v - lo) / range;
            let delta2 = (hi - *v) / range;
            let u = rng.unit();
            let deltaq = if u < 0.5 {
                let xy = 1.0 - delta1;
                let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(self.eta + 1.0);
                val.powf(exponent) - 1.0
            } else {
                let xy = 1.0 - delta2;
                let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(self.eta + 1.0);
                1.0 - val.powf(exponent)
            };
            *v += deltaq * range;
        }
        DecisionVector(out)
    }

    /// Mutates an evaluated parent; the child is clamped and evaluated.
    pub fn apply(&self, problem: &ProblemSpec, parent: &Solution, rng: &mut RngStream) -> Solution {
        repair(problem, self.perturb(problem, &parent.decision, rng))
    }
}

pub(crate) fn repair(problem: &ProblemSpec, x: DecisionVector) -> Solution {
    Solution::repaired(problem, x).expect("operator output has the problem's dimension")
}

/// Decision vector drawn uniformly from the problem's box.
pub fn random_decision(problem: &ProblemSpec, rng: &mut RngStream) -> DecisionVector {
    DecisionVector(
        problem
            .bounds()
            .iter()
            .map(|(lo, hi)| rng.uniform(lo, hi))
            .collect(),
    )
}
