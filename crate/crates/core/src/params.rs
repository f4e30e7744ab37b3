use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the sharing factor ξ is chosen each generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiMode {
    /// Use `ControlParams::xi` unchanged.
    #[default]
    Fixed,
    /// Redraw ξ from uniform(0, 1) once per generation.
    UniformPerGeneration,
}

impl FromStr for XiMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(Self::Fixed),
            "uniform" | "uniform_per_generation" => Ok(Self::UniformPerGeneration),
            other => Err(Error::InvalidParameter {
                name: "xi_mode",
                reason: format!("expected `fixed` or `uniform`, got `{other}`"),
            }),
        }
    }
}

/// SSLPSA control parameters. `Default` reproduces the reference
/// configuration: P_mut 0.1, P_s 30, ξ 0.65, 100 generations, 5 SOM epochs,
/// s_f 1000, α 0.4, μ 0.5.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControlParams {
    /// Probability that a TBGA child pair is produced by mutation rather than
    /// crossover.
    pub p_mut: f64,
    pub pop_size: usize,
    /// Sharing factor: fraction of the population routed to the TBGA phase.
    pub xi: f64,
    pub generations: usize,
    /// SOM training sweeps per phase per generation.
    pub som_epochs: usize,
    /// Descending constant in the learning-rate argument.
    pub s_f: f64,
    /// Learning-rate adaptation step.
    pub alpha: f64,
    /// Step size of the running moments behind the scaling value.
    pub mu: f64,
    /// Children produced per generation by the TBGA phase.
    pub pool_size: usize,
    pub som_units_qabc: usize,
    pub som_units_tbga: usize,
    pub xi_mode: XiMode,
    pub archive_cap: Option<usize>,
    /// Re-split the merged population every generation instead of keeping the
    /// initial split.
    pub reshuffle_each_generation: bool,
}

impl Default for ControlParams {
    fn default() -> Self {
        Self {
            p_mut: 0.1,
            pop_size: 30,
            xi: 0.65,
            generations: 100,
            som_epochs: 5,
            s_f: 1000.0,
            alpha: 0.4,
            mu: 0.5,
            pool_size: 20,
            som_units_qabc: 10,
            som_units_tbga: 10,
            xi_mode: XiMode::Fixed,
            archive_cap: None,
            reshuffle_each_generation: true,
        }
    }
}

impl ControlParams {
    pub fn validate(&self) -> Result<()> {
        probability("p_mut", self.p_mut)?;
        probability("xi", self.xi)?;
        if self.pop_size < 2 {
            return Err(invalid("pop_size", "must be at least 2"));
        }
        positive_count("som_epochs", self.som_epochs)?;
        positive_count("pool_size", self.pool_size)?;
        positive_count("som_units_qabc", self.som_units_qabc)?;
        positive_count("som_units_tbga", self.som_units_tbga)?;
        if !(self.s_f > 0.0 && self.s_f.is_finite()) {
            return Err(invalid("s_f", "must be a positive finite number"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(invalid("alpha", "must lie in (0, 1]"));
        }
        if !(self.mu > 0.0 && self.mu <= 1.0) {
            return Err(invalid("mu", "must lie in (0, 1]"));
        }
        if self.archive_cap == Some(0) {
            return Err(invalid("archive_cap", "must be positive when set"));
        }
        Ok(())
    }
}

/// NSGA-II baseline parameters: 100 chromosomes, a mating pool of 20,
/// binary tournaments, mutation probability 0.1 and 100 generations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Nsga2Params {
    pub pop_size: usize,
    pub pool_size: usize,
    /// Per-child probability of applying polynomial mutation.
    pub p_mut: f64,
    /// Per-pair probability of applying SBX.
    pub p_crossover: f64,
    pub generations: usize,
}

impl Default for Nsga2Params {
    fn default() -> Self {
        Self {
            pop_size: 100,
            pool_size: 20,
            p_mut: 0.1,
            p_crossover: 0.9,
            generations: 100,
        }
    }
}

impl Nsga2Params {
    pub fn validate(&self) -> Result<()> {
        probability("p_mut", self.p_mut)?;
        probability("p_crossover", self.p_crossover)?;
        if self.pop_size < 2 {
            return Err(invalid("pop_size", "must be at least 2"));
        }
        if self.pool_size < 2 {
            return Err(invalid("pool_size", "must be at least 2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Sslpsa,
    Nsga2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Sslpsa, Algorithm::Nsga2];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Sslpsa => "sslpsa",
            Algorithm::Nsga2 => "nsga2",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sslpsa" => Ok(Self::Sslpsa),
            "nsga2" => Ok(Self::Nsga2),
            other => Err(Error::InvalidParameter {
                name: "algorithm",
                reason: format!("expected `sslpsa` or `nsga2`, got `{other}`"),
            }),
        }
    }
}

/// Parameters of whichever algorithm produced a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum AlgorithmParams {
    Sslpsa(ControlParams),
    Nsga2(Nsga2Params),
}

/// Splits `pop_size` into (QABC, TBGA) phase sizes for sharing factor `xi`.
///
/// The QABC share is `(1 - xi) * pop_size` rounded half-up; each phase keeps
/// at least one solution.
pub fn split_counts(pop_size: usize, xi: f64) -> (usize, usize) {
    debug_assert!(pop_size >= 2 && (0.0..=1.0).contains(&xi));
    let share = (1.0 - xi) * pop_size as f64;
    // Absorb representation error so that e.g. 0.35 * 30 rounds to 11.
    let mut n_qabc = (share + 0.5 + 1e-9).floor() as usize;
    n_qabc = n_qabc.clamp(1, pop_size - 1);
    (n_qabc, pop_size - n_qabc)
}

fn probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(invalid(name, "must lie in [0, 1]"))
    }
}

fn positive_count(name: &'static str, value: usize) -> Result<()> {
    if value == 0 {
        Err(invalid(name, "must be positive"))
    } else {
        Ok(())
    }
}

fn invalid(name: &'static str, reason: &str) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn defaults_match_reference_table() {
        let p = ControlParams::default();
        assert_eq!(p.p_mut, 0.1);
        assert_eq!(p.pop_size, 30);
        assert_eq!(p.xi, 0.65);
        assert_eq!(p.generations, 100);
        assert_eq!(p.som_epochs, 5);
        assert_eq!(p.s_f, 1000.0);
        assert_eq!(p.alpha, 0.4);
        assert_eq!(p.mu, 0.5);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn split_reference_configuration() {
        assert_eq!(split_counts(30, 0.65), (11, 19));
    }

    #[test]
    fn split_keeps_one_per_phase() {
        assert_eq!(split_counts(30, 0.0), (29, 1));
        assert_eq!(split_counts(30, 1.0), (1, 29));
        assert_eq!(split_counts(2, 0.5), (1, 1));
    }

    #[test]
    fn split_symmetric() {
        assert_eq!(split_counts(100, 0.5), (50, 50));
    }

    #[test]
    fn out_of_range_xi_rejected() {
        let p = ControlParams {
            xi: 1.5,
            ..ControlParams::default()
        };
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter { name: "xi", .. })
        ));
    }

    #[test]
    fn unknown_param_keys_rejected() {
        let err = serde_json::from_str::<ControlParams>(r#"{"p_mut": 0.2, "bogus": 1}"#);
        assert!(err.is_err());
        let ok: ControlParams = serde_json::from_str(r#"{"p_mut": 0.2}"#).unwrap();
        assert_eq!(ok.p_mut, 0.2);
        assert_eq!(ok.pop_size, 30);
    }

    proptest! {
        #[test]
        fn split_conserves_population(pop in 2usize..500, xi in 0.0f64..=1.0) {
            let (q, t) = split_counts(pop, xi);
            prop_assert_eq!(q + t, pop);
            prop_assert!(q >= 1 && t >= 1);
        }
    }
}
