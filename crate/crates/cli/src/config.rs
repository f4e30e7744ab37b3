use std::fs;
use std::path::{Path, PathBuf};

use pareto_forge::{Algorithm, ControlParams, Nsga2Params, ProblemId, XiMode};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Flat experiment configuration as read from a `--config` file. Every key is
/// optional; missing keys fall back to the algorithm defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<Algorithm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pop_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_mode: Option<XiMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_mut: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pool_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub som_units: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub archive_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Fills every key unset in `self` from `lower`.
    pub fn or(self, lower: ConfigFile) -> ConfigFile {
        ConfigFile {
            problem: self.problem.or(lower.problem),
            algorithm: self.algorithm.or(lower.algorithm),
            seed: self.seed.or(lower.seed),
            runs: self.runs.or(lower.runs),
            generations: self.generations.or(lower.generations),
            pop_size: self.pop_size.or(lower.pop_size),
            xi: self.xi.or(lower.xi),
            xi_mode: self.xi_mode.or(lower.xi_mode),
            p_mut: self.p_mut.or(lower.p_mut),
            pool_size: self.pool_size.or(lower.pool_size),
            som_units: self.som_units.or(lower.som_units),
            archive_cap: self.archive_cap.or(lower.archive_cap),
            out: self.out.or(lower.out),
        }
    }
}

pub const DEFAULT_OUT: &str = "pareto-forge-out";

/// A configuration with every choice made.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub problem: ProblemId,
    pub algorithm: Option<Algorithm>,
    pub base_seed: u64,
    pub runs: usize,
    pub out: PathBuf,
    overrides: ConfigFile,
}

impl Experiment {
    pub fn resolve(merged: ConfigFile) -> Result<Self, CliError> {
        let problem = merged
            .problem
            .ok_or_else(|| CliError::Usage("missing --problem".into()))?;
        let runs = merged.runs.unwrap_or(30);
        if runs == 0 {
            return Err(CliError::Usage("--runs must be at least 1".into()));
        }
        let experiment = Self {
            problem,
            algorithm: merged.algorithm,
            base_seed: merged.seed.unwrap_or(0),
            runs,
            out: merged.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
            overrides: merged,
        };
        experiment.sslpsa_params().validate()?;
        experiment.nsga2_params().validate()?;
        Ok(experiment)
    }

    pub fn sslpsa_params(&self) -> ControlParams {
        let o = &self.overrides;
        let d = ControlParams::default();
        ControlParams {
            generations: o.generations.unwrap_or(d.generations),
            pop_size: o.pop_size.unwrap_or(d.pop_size),
            xi: o.xi.unwrap_or(d.xi),
            xi_mode: o.xi_mode.unwrap_or(d.xi_mode),
            p_mut: o.p_mut.unwrap_or(d.p_mut),
            pool_size: o.pool_size.unwrap_or(d.pool_size),
            som_units_qabc: o.som_units.unwrap_or(d.som_units_qabc),
            som_units_tbga: o.som_units.unwrap_or(d.som_units_tbga),
            archive_cap: o.archive_cap.or(d.archive_cap),
            ..d
        }
    }

    pub fn nsga2_params(&self) -> Nsga2Params {
        let o = &self.overrides;
        let d = Nsga2Params::default();
        Nsga2Params {
            generations: o.generations.unwrap_or(d.generations),
            pop_size: o.pop_size.unwrap_or(d.pop_size),
            p_mut: o.p_mut.unwrap_or(d.p_mut),
            pool_size: o.pool_size.unwrap_or(d.pool_size),
            ..d
        }
    }

    /// The flat configuration that reproduces this experiment, for one run
    /// with `seed` when given.
    pub fn to_config(&self, algorithm: Option<Algorithm>, seed: Option<u64>) -> ConfigFile {
        ConfigFile {
            problem: Some(self.problem),
            algorithm: algorithm.or(self.algorithm),
            seed: Some(seed.unwrap_or(self.base_seed)),
            runs: Some(if seed.is_some() { 1 } else { self.runs }),
            out: Some(self.out.clone()),
            ..self.overrides.clone()
        }
    }
}
