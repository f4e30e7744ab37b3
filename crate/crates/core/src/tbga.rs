//! Tournament-based genetic algorithm phase.
//!
//! Parents come from binary tournaments that prefer feasible solutions, then
//! smaller constraint violation, then the crowded-comparison order. Each child
//! pair is produced by mutation with probability `p_mut` and by SBX
//! otherwise; parents and children are then truncated back to the phase's
//! share of the population.

use std::cmp::Ordering;

use crate::dominance::{self, crowded_compare, crowded_truncate};
use crate::operators::{PolynomialMutation, Sbx};
use crate::params::ControlParams;
use crate::problems::ProblemSpec;
use crate::qabc::{nondominated, PhaseOutput};
use crate::rng::RngStream;
use crate::som::SomCenter;
use crate::types::Solution;

/// Index of the winner of a binary tournament over `pop`, which must carry
/// rank and crowding stamps.
pub fn tournament_select(pop: &[Solution], rng: &mut RngStream) -> usize {
    if pop.len() < 2 {
        return 0;
    }
    let a = rng.index(pop.len());
    let mut b = rng.index(pop.len() - 1);
    if b >= a {
        b += 1;
    }
    match tournament_order(&pop[a], &pop[b]) {
        Ordering::Greater => b,
        _ => a,
    }
}

/// Feasible beats infeasible; between infeasible solutions the smaller
/// violation wins; otherwise crowded comparison.
fn tournament_order(a: &Solution, b: &Solution) -> Ordering {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (false, false) => a.violation.total_cmp(&b.violation),
        (true, true) => crowded_compare(a, b),
    }
}

/// Children produced by one breeding step.
#[derive(Debug, Clone, Default)]
pub struct Brood {
    pub children: Vec<Solution>,
    /// Child pairs that came from mutation.
    pub mutation_pairs: usize,
    /// Child pairs that came from crossover.
    pub crossover_pairs: usize,
}

/// Breeds `pool_size` children from a stamped parent population.
pub fn breed(
    parents: &[Solution],
    pool_size: usize,
    p_mut: f64,
    problem: &ProblemSpec,
    rng: &mut RngStream,
) -> Brood {
    let sbx = Sbx::default();
    let mutation = PolynomialMutation::default();
    let mut brood = Brood::default();
    while brood.children.len() < pool_size {
        let u = rng.unit();
        let p1 = &parents[tournament_select(parents, rng)];
        let p2 = &parents[tournament_select(parents, rng)];
        let (c1, c2) = if u < p_mut {
            brood.mutation_pairs += 1;
            (mutation.apply(problem, p1, rng), mutation.apply(problem, p2, rng))
        } else {
            brood.crossover_pairs += 1;
            sbx.apply(problem, p1, p2, rng)
        };
        brood.children.push(c1);
        if brood.children.len() < pool_size {
            brood.children.push(c2);
        }
    }
    brood
}

/// One TBGA generation. The returned population holds `target` solutions.
pub fn run_tbga_phase(
    mut subpop: Vec<Solution>,
    center: &mut SomCenter,
    params: &ControlParams,
    problem: &ProblemSpec,
    rng: &mut RngStream,
    target: usize,
) -> PhaseOutput {
    if subpop.is_empty() {
        return PhaseOutput::default();
    }

    let fronts = dominance::stamp(&mut subpop).expect("non-empty");
    let elite: Vec<Solution> = fronts.first().iter().map(|&i| subpop[i].clone()).collect();
    let mut offers = center.train(&elite, problem, rng);

    let brood = breed(&subpop, params.pool_size, params.p_mut, problem, rng);

    subpop.extend(brood.children);
    offers.extend(nondominated(subpop.clone()));
    let population = crowded_truncate(subpop, target);
    PhaseOutput { population, offers }
}
