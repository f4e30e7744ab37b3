//! Multi-objective optimization toolkit built around a synchronous
//! self-learning Pareto strategy (SSLPSA).
//!
//! Each generation splits the population between two concurrently running
//! operators, a quasi artificial bee colony (no scout phase) and a
//! tournament-based genetic algorithm. Both phases feed an adaptive
//! self-organizing map with conscience whose units migrate toward dominating
//! regions, and every non-dominated point discovered lands in a global
//! external archive.
//!
//! The crate also ships an NSGA-II baseline, the ZDT1/2/3/4/6, SCH and FON
//! benchmarks with analytic reference fronts, and the γ, Δ, IGD and SPREAD
//! quality indicators.
//!
//! ```
//! use pareto_forge::{engine, metrics, ControlParams, ProblemId, ProblemSpec};
//!
//! let problem = ProblemSpec::new(ProblemId::Sch);
//! let params = ControlParams { generations: 20, ..ControlParams::default() };
//! let result = engine::run_sslpsa(&problem, &params, 7).unwrap();
//!
//! let reference = problem.true_front_sample(200).unwrap();
//! let front: Vec<_> = result.archive_members.iter().map(|s| s.objectives.clone()).collect();
//! assert!(metrics::gamma(&front, &reference).unwrap() < 0.5);
//! ```

pub mod archive;
pub mod dominance;
pub mod engine;
mod error;
pub mod metrics;
pub mod operators;
mod params;
pub mod problems;
pub mod qabc;
mod rng;
pub mod som;
pub mod tbga;
mod types;

pub use archive::Archive;
pub use dominance::{crowded_compare, dominates, fast_nondominated_sort, FrontSet};
pub use engine::{run_nsga2, run_sslpsa, RunResult};
pub use error::{Error, Result};
pub use params::{split_counts, Algorithm, AlgorithmParams, ControlParams, Nsga2Params, XiMode};
pub use problems::{ProblemId, ProblemSpec};
pub use rng::RngStream;
pub use som::SomCenter;
pub use types::{clamp_to_bounds, Bounds, DecisionVector, ObjectiveVector, Solution};
