//! Time-adaptive self-organizing map with a conscience mechanism.
//!
//! Units live in decision space. Presented inputs are elite (non-dominated)
//! solutions; a winning unit only moves toward an input that Pareto-dominates
//! it, so the map drifts toward better regions of the search space.
//!
//! Per presentation of an input R:
//!
//! 1. running moments `e1 += μ (R - e1)`, `e2 += μ (R² - e2)` and scaling value
//!    `sl = sqrt(max(ε, mean(e2 - e1²)))`;
//! 2. best-matching unit `j = argmin ‖R - W_j‖ₙ - b_j`, where `‖·‖ₙ` is the
//!    root-mean-square distance with each variable scaled by its bound width;
//! 3. conscience: `b_j -= 0.3` for the winner, `b_i *= 0.8` for the others;
//! 4. learning rate `h_j += α (f(‖R - W_j‖ / (s_f sl)) - h_j)` with
//!    `f(z) = 1 - 1/(1 + z)`;
//! 5. `W_j += y h_j (R - W_j)` where `y = 1` iff R dominates W_j.

use serde::{Deserialize, Serialize};

use crate::dominance::pareto_dominates;
use crate::error::{Error, Result};
use crate::operators::{random_decision, repair};
use crate::params::ControlParams;
use crate::problems::ProblemSpec;
use crate::rng::RngStream;
use crate::types::{DecisionVector, Solution};

/// Lower bound on the scaling value.
pub const SL_FLOOR: f64 = 1e-9;
/// Learning rate of a freshly initialized unit.
pub const INITIAL_LEARNING_RATE: f64 = 0.95;
/// Bias penalty charged to the winning unit.
pub const WINNER_PENALTY: f64 = 0.3;
/// Decay applied to the biases of losing units.
pub const LOSER_DECAY: f64 = 0.8;

/// Squashing function `f(z) = 1 - 1/(1+z)`.
pub fn squash_f(z: f64) -> Result<f64> {
    if z < 0.0 || z.is_nan() {
        return Err(Error::NegativeSquashInput(z));
    }
    Ok(1.0 - 1.0 / (1.0 + z))
}

/// Dominance gate: 1 iff `input` dominates `unit`.
pub fn gate_y(input: &Solution, unit: &SomUnit) -> u8 {
    u8::from(pareto_dominates(&input.objectives, &unit.weight.objectives))
}

/// One step of the learning-rate adaptation toward `squash_f(z)`.
pub fn adapted_learning_rate(h: f64, alpha: f64, z: f64) -> f64 {
    let target = squash_f(z.max(0.0)).unwrap_or(0.0);
    (h + alpha * (target - h)).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SomUnit {
    /// Weight vector together with its evaluation.
    pub weight: Solution,
    pub learning_rate: f64,
    /// Conscience bias; never positive.
    pub bias: f64,
}

impl SomUnit {
    pub fn new(weight: Solution) -> Self {
        Self {
            weight,
            learning_rate: INITIAL_LEARNING_RATE,
            bias: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SomCenter {
    pub units: Vec<SomUnit>,
    /// Running first moment per decision variable.
    pub e1: Vec<f64>,
    /// Running second moment per decision variable.
    pub e2: Vec<f64>,
    /// Scaling value, at least [`SL_FLOOR`].
    pub sl: f64,
    pub alpha: f64,
    pub mu: f64,
    pub s_f: f64,
    pub epochs: usize,
    /// Bound width per decision variable, used to normalize BMU distances.
    pub span: Vec<f64>,
    /// Wins per unit since construction.
    pub win_counts: Vec<usize>,
}

impl SomCenter {
    /// `n_units` units spread uniformly over the problem's box, with moments
    /// seeded from uniform(0, 0.01).
    pub fn random(
        problem: &ProblemSpec,
        n_units: usize,
        params: &ControlParams,
        rng: &mut RngStream,
    ) -> Self {
        let units = (0..n_units)
            .map(|_| SomUnit::new(repair(problem, random_decision(problem, rng))))
            .collect();
        let d = problem.dimension();
        let e1 = (0..d).map(|_| rng.uniform(0.0, 0.01)).collect();
        let e2 = (0..d).map(|_| rng.uniform(0.0, 0.01)).collect();
        let mut center = Self::from_parts(units, e1, e2, params);
        center.span = problem.bounds().iter().map(|(lo, hi)| hi - lo).collect();
        center
    }

    pub fn from_parts(units: Vec<SomUnit>, e1: Vec<f64>, e2: Vec<f64>, params: &ControlParams) -> Self {
        debug_assert_eq!(e1.len(), e2.len());
        let mut center = Self {
            win_counts: vec![0; units.len()],
            span: vec![1.0; e1.len()],
            units,
            e1,
            e2,
            sl: SL_FLOOR,
            alpha: params.alpha,
            mu: params.mu,
            s_f: params.s_f,
            epochs: params.som_epochs,
        };
        center.sl = center.scaling_value();
        center
    }

    fn scaling_value(&self) -> f64 {
        let n = self.e1.len().max(1) as f64;
        let variance = self
            .e1
            .iter()
            .zip(&self.e2)
            .map(|(m1, m2)| m2 - m1 * m1)
            .sum::<f64>()
            / n;
        variance.max(SL_FLOOR).sqrt().max(SL_FLOOR)
    }

    /// Advances the running moments with `input` and refreshes `sl`.
    pub fn update_scaling(&mut self, input: &[f64]) {
        debug_assert_eq!(input.len(), self.e1.len());
        for ((m1, m2), &x) in self.e1.iter_mut().zip(self.e2.iter_mut()).zip(input) {
            *m1 += self.mu * (x - *m1);
            *m2 += self.mu * (x * x - *m2);
        }
        self.sl = self.scaling_value();
    }

    /// Unit minimizing `‖input - W_j‖ₙ - b_j`; lowest index on ties.
    pub fn select_bmu(&self, input: &[f64]) -> usize {
        let mut best = 0;
        let mut best_score = f64::INFINITY;
        for (j, unit) in self.units.iter().enumerate() {
            let score = self.normalized_distance(input, &unit.weight.decision) - unit.bias;
            if score < best_score {
                best_score = score;
                best = j;
            }
        }
        best
    }

    /// Root-mean-square distance with each variable divided by its span.
    pub fn normalized_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let n = a.len().max(1) as f64;
        let sum: f64 = a
            .iter()
            .zip(b)
            .zip(&self.span)
            .map(|((x, y), w)| ((x - y) / w).powi(2))
            .sum();
        (sum / n).sqrt()
    }

    pub fn update_conscience(&mut self, winner: usize) {
        for (j, unit) in self.units.iter_mut().enumerate() {
            if j == winner {
                unit.bias -= WINNER_PENALTY;
            } else {
                unit.bias *= LOSER_DECAY;
            }
        }
    }

    /// Adapts the learning rate of `unit` for a presentation of `input`.
    pub fn update_learning_rate(&mut self, unit: usize, input: &[f64]) {
        let z = distance(input, &self.units[unit].weight.decision) / (self.s_f * self.sl);
        let u = &mut self.units[unit];
        u.learning_rate = adapted_learning_rate(u.learning_rate, self.alpha, z);
    }

    /// Runs `epochs` sweeps over `inputs` (shuffled each sweep).
    ///
    /// A moved weight replaces its unit only when it dominates the old weight.
    /// Moved weights that are incomparable with the old weight are returned
    /// for insertion into the archive.
    pub fn train(
        &mut self,
        inputs: &[Solution],
        problem: &ProblemSpec,
        rng: &mut RngStream,
    ) -> Vec<Solution> {
        let mut offers = Vec::new();
        if inputs.is_empty() || self.units.is_empty() {
            return offers;
        }
        let mut order: Vec<usize> = (0..inputs.len()).collect();
        for _ in 0..self.epochs {
            rand::seq::SliceRandom::shuffle(order.as_mut_slice(), rng);
            for &i in &order {
                if let Some(moved) = self.present(&inputs[i], problem) {
                    offers.push(moved);
                }
            }
        }
        offers
    }

    /// Presents one input; returns the moved weight if it is incomparable with
    /// the unit's previous weight.
    pub fn present(&mut self, input: &Solution, problem: &ProblemSpec) -> Option<Solution> {
        let r = input.decision.as_ref();
        self.update_scaling(r);
        let winner = self.select_bmu(r);
        self.win_counts[winner] += 1;
        self.update_conscience(winner);
        self.update_learning_rate(winner, r);

        let unit = &self.units[winner];
        if gate_y(input, unit) == 0 {
            return None;
        }
        let h = unit.learning_rate;
        let w = &unit.weight.decision;
        let moved: Vec<f64> = w.iter().zip(r).map(|(wj, rj)| wj + h * (rj - wj)).collect();
        let moved = repair(problem, DecisionVector(moved));

        let old = &unit.weight.objectives;
        if pareto_dominates(&moved.objectives, old) {
            self.units[winner].weight = moved;
            None
        } else if pareto_dominates(old, &moved.objectives) || moved.objectives == *old {
            None
        } else {
            Some(moved)
        }
    }

    /// Unit weights as solutions.
    pub fn weights(&self) -> Vec<Solution> {
        self.units.iter().map(|u| u.weight.clone()).collect()
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
