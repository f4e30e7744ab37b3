//! Run drivers for SSLPSA and the NSGA-II baseline.

use std::time::Instant;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::archive::Archive;
use crate::dominance::{self, crowded_truncate};
use crate::error::Result;
use crate::operators::{random_decision, repair, PolynomialMutation, Sbx};
use crate::params::{split_counts, Algorithm, AlgorithmParams, ControlParams, Nsga2Params, XiMode};
use crate::problems::{ProblemId, ProblemSpec};
use crate::qabc::{nondominated, run_qabc_phase, PhaseOutput};
use crate::rng::RngStream;
use crate::som::SomCenter;
use crate::tbga::{run_tbga_phase, tournament_select};
use crate::types::Solution;

/// One line of the per-generation trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub generation: usize,
    pub archive_size: usize,
    /// QABC share of the population this generation (0 for NSGA-II).
    pub n_qabc: usize,
    /// TBGA share, or the whole population for NSGA-II.
    pub n_tbga: usize,
    pub xi: f64,
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub problem: ProblemId,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub params: AlgorithmParams,
    pub final_population: Vec<Solution>,
    /// Pairwise non-dominated.
    pub archive_members: Vec<Solution>,
    pub som_weights_qabc: Vec<Solution>,
    pub som_weights_tbga: Vec<Solution>,
    pub trace: Vec<TraceRecord>,
    /// Seconds.
    pub wall_time: f64,
}

/// How the two SSLPSA phases of a generation are scheduled. Both modes give
/// identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Runs SSLPSA with both phases of each generation executing concurrently.
pub fn run_sslpsa(problem: &ProblemSpec, params: &ControlParams, seed: u64) -> Result<RunResult> {
    run_sslpsa_with(problem, params, seed, Execution::Parallel)
}

pub fn run_sslpsa_with(
    problem: &ProblemSpec,
    params: &ControlParams,
    seed: u64,
    execution: Execution,
) -> Result<RunResult> {
    params.validate()?;
    let started = Instant::now();
    let root = RngStream::new(seed);

    let mut population = initial_population(problem, params.pop_size, &mut root.child("init"));
    let mut archive = Archive::new(params.archive_cap);
    archive.offer_all(nondominated(population.clone()));

    let mut som_rng = root.child("som");
    let mut qabc_center = SomCenter::random(problem, params.som_units_qabc, params, &mut som_rng);
    let mut tbga_center = SomCenter::random(problem, params.som_units_tbga, params, &mut som_rng);

    let mut xi = params.xi;
    let mut trace = Vec::with_capacity(params.generations);
    for generation in 0..params.generations {
        let mut gen_rng = root.child(&format!("generation/{generation}"));
        if params.xi_mode == XiMode::UniformPerGeneration {
            xi = gen_rng.unit();
        }
        if params.reshuffle_each_generation {
            population.shuffle(&mut gen_rng);
        }
        let (n_qabc, n_tbga) = split_counts(params.pop_size, xi);
        let tbga_share = population.split_off(n_qabc);
        let qabc_share = std::mem::take(&mut population);

        let mut qabc_rng = gen_rng.child("qabc");
        let mut tbga_rng = gen_rng.child("tbga");
        let qabc_phase = |center: &mut SomCenter| run_qabc_phase(qabc_share, center, problem, &mut qabc_rng);
        let tbga_phase =
            |center: &mut SomCenter| run_tbga_phase(tbga_share, center, params, problem, &mut tbga_rng, n_tbga);
        let (qabc_out, tbga_out): (PhaseOutput, PhaseOutput) = match execution {
            Execution::Serial => (qabc_phase(&mut qabc_center), tbga_phase(&mut tbga_center)),
            Execution::Parallel => {
                rayon::join(|| qabc_phase(&mut qabc_center), || tbga_phase(&mut tbga_center))
            }
        };

        archive.offer_all(qabc_out.offers);
        archive.offer_all(tbga_out.offers);
        population = collection_site_merge(qabc_out.population, tbga_out.population, params.pop_size);

        trace.push(TraceRecord {
            generation,
            archive_size: archive.len(),
            n_qabc,
            n_tbga,
            xi,
        });
    }

    dominance::stamp(&mut population)?;
    Ok(RunResult {
        problem: problem.id(),
        algorithm: Algorithm::Sslpsa,
        seed,
        params: AlgorithmParams::Sslpsa(params.clone()),
        final_population: population,
        archive_members: archive.into_members(),
        som_weights_qabc: qabc_center.weights(),
        som_weights_tbga: tbga_center.weights(),
        trace,
        wall_time: started.elapsed().as_secs_f64(),
    })
}

fn initial_population(problem: &ProblemSpec, size: usize, rng: &mut RngStream) -> Vec<Solution> {
    (0..size)
        .map(|_| repair(problem, random_decision(problem, rng)))
        .collect()
}

/// Joins the phase populations (QABC first) into exactly `pop_size`
/// solutions. A surplus is removed by crowded truncation; a shortfall is
/// filled by repeating survivors in crowded order.
pub fn collection_site_merge(
    qabc: Vec<Solution>,
    tbga: Vec<Solution>,
    pop_size: usize,
) -> Vec<Solution> {
    let mut merged = qabc;
    merged.extend(tbga);
    if merged.len() > pop_size {
        return crowded_truncate(merged, pop_size);
    }
    if merged.len() < pop_size && !merged.is_empty() {
        let ranked = crowded_truncate(merged.clone(), merged.len());
        let missing = pop_size - merged.len();
        merged.extend(ranked.into_iter().cycle().take(missing));
    }
    merged
}

/// Runs the NSGA-II baseline. Each generation fills a mating pool of
/// `pool_size` tournament winners, breeds `pop_size` offspring from it and
/// keeps the best `pop_size` of parents and offspring.
pub fn run_nsga2(problem: &ProblemSpec, params: &Nsga2Params, seed: u64) -> Result<RunResult> {
    params.validate()?;
    let started = Instant::now();
    let root = RngStream::new(seed);
    let sbx = Sbx::default();
    let mutation = PolynomialMutation::default();

    let mut population = initial_population(problem, params.pop_size, &mut root.child("init"));
    dominance::stamp(&mut population)?;

    let mut trace = Vec::with_capacity(params.generations);
    for generation in 0..params.generations {
        let mut rng = root.child(&format!("generation/{generation}"));
        let pool: Vec<usize> = (0..params.pool_size)
            .map(|_| tournament_select(&population, &mut rng))
            .collect();

        let mut offspring = Vec::with_capacity(params.pop_size);
        while offspring.len() < params.pop_size {
            let p1 = &population[pool[rng.index(pool.len())]];
            let p2 = &population[pool[rng.index(pool.len())]];
            let (mut c1, mut c2) = if rng.unit() < params.p_crossover {
                sbx.apply(problem, p1, p2, &mut rng)
            } else {
                (p1.clone(), p2.clone())
            };
            for child in [&mut c1, &mut c2] {
                if rng.unit() < params.p_mut {
                    *child = mutation.apply(problem, child, &mut rng);
                }
            }
            offspring.push(c1);
            if offspring.len() < params.pop_size {
                offspring.push(c2);
            }
        }

        population.extend(offspring);
        population = crowded_truncate(population, params.pop_size);
        // Truncation stamps the combined set; restamp the survivors for the
        // next round of tournaments.
        dominance::stamp(&mut population)?;

        trace.push(TraceRecord {
            generation,
            archive_size: population.iter().filter(|s| s.rank == 0).count(),
            n_qabc: 0,
            n_tbga: params.pop_size,
            xi: 1.0,
        });
    }

    let mut archive = Archive::new(None);
    archive.offer_all(population.iter().filter(|s| s.rank == 0).cloned());
    Ok(RunResult {
        problem: problem.id(),
        algorithm: Algorithm::Nsga2,
        seed,
        params: AlgorithmParams::Nsga2(params.clone()),
        final_population: population,
        archive_members: archive.into_members(),
        som_weights_qabc: Vec::new(),
        som_weights_tbga: Vec::new(),
        trace,
        wall_time: started.elapsed().as_secs_f64(),
    })
}
