//! Run configuration: flag syntaxes, defaults, and the key=value config file.

use ucurve_core::estimators::EstimatorSpec;
use ucurve_core::learner::TieRule;
use ucurve_core::search::{NeighborOrder, SearchConfig, StartPolicy, StochasticConfig};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceChoice {
    Partition,
    Feature,
    L2,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EstimatorChoice {
    /// `holdout:V` — validation size V (select/oracle/check) or percentage
    /// of each sample size (simulate).
    Holdout(usize),
    /// `kfold:K`.
    KFold(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModeChoice {
    Reuse,
    /// Fraction of the sample reserved (from the tail) for final learning.
    Independent(f64),
}

/// Everything a run needs; every field has a default.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub space: SpaceChoice,
    pub estimator: EstimatorChoice,
    pub mode: ModeChoice,
    pub seed: u64,
    pub fallback: usize,
    pub stochastic: Option<(usize, usize)>,
    pub order: NeighborOrder,
    pub prune_worse: bool,
    pub convexity_prune: bool,
    pub tie: TieRule,
    /// Maximum number of distinct feature rows accepted from a dataset.
    pub cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            space: SpaceChoice::Partition,
            estimator: EstimatorChoice::Holdout(0), // resolved against n later
            mode: ModeChoice::Reuse,
            seed: 0,
            fallback: 0,
            stochastic: None,
            order: NeighborOrder::Canonical,
            prune_worse: false,
            convexity_prune: false,
            tie: TieRule::PreferOne,
            cap: 9,
        }
    }
}

impl RunConfig {
    pub fn search_config(&self) -> SearchConfig {
        SearchConfig {
            start: if self.stochastic.is_some() {
                StartPolicy::SeededRandom(self.seed)
            } else {
                StartPolicy::Coarsest
            },
            exhaustive_fallback_threshold: self.fallback,
            prune_visited_worse_neighbors: self.prune_worse,
            convexity_prune: self.convexity_prune,
            stochastic: self.stochastic.map(|(restarts, budget)| StochasticConfig {
                restarts,
                budget,
                seed: self.seed,
            }),
            neighbor_order: self.order,
        }
    }

    /// Instantiates the estimator for a sample of size `n`. `holdout:0`
    /// (the default) resolves to a half/half split.
    pub fn estimator_spec(&self, n: usize) -> EstimatorSpec {
        let spec = match self.estimator {
            EstimatorChoice::Holdout(0) => EstimatorSpec::holdout(n / 2),
            EstimatorChoice::Holdout(v) => EstimatorSpec::holdout(v),
            EstimatorChoice::KFold(k) => EstimatorSpec::kfold(k),
        };
        spec.with_tie(self.tie)
    }

    /// For the simulation command the holdout parameter is a percentage.
    pub fn estimator_spec_scaled(&self, n: usize) -> EstimatorSpec {
        let spec = match self.estimator {
            EstimatorChoice::Holdout(0) => EstimatorSpec::holdout((n / 2).max(1)),
            EstimatorChoice::Holdout(pct) => {
                EstimatorSpec::holdout((n * pct / 100).clamp(1, n.saturating_sub(1).max(1)))
            }
            EstimatorChoice::KFold(k) => EstimatorSpec::kfold(k),
        };
        spec.with_tie(self.tie)
    }
}

pub fn parse_space(s: &str) -> Result<SpaceChoice, CliError> {
    match s {
        "partition" => Ok(SpaceChoice::Partition),
        "feature" => Ok(SpaceChoice::Feature),
        "l2" => Ok(SpaceChoice::L2),
        other => Err(CliError::input(format!(
            "unknown space {other:?}; expected partition, feature, or l2"
        ))),
    }
}

pub fn parse_estimator(s: &str) -> Result<EstimatorChoice, CliError> {
    let (kind, arg) = s
        .split_once(':')
        .ok_or_else(|| CliError::input(format!("estimator {s:?} must look like holdout:V or kfold:K")))?;
    let value: usize = arg
        .parse()
        .map_err(|_| CliError::input(format!("estimator parameter {arg:?} is not a number")))?;
    match kind {
        "holdout" => Ok(EstimatorChoice::Holdout(value)),
        "kfold" => Ok(EstimatorChoice::KFold(value)),
        other => Err(CliError::input(format!("unknown estimator {other:?}"))),
    }
}

pub fn parse_mode(s: &str) -> Result<ModeChoice, CliError> {
    if s == "reuse" {
        return Ok(ModeChoice::Reuse);
    }
    if let Some(frac) = s.strip_prefix("independent:") {
        let f: f64 = frac
            .parse()
            .map_err(|_| CliError::input(format!("mode fraction {frac:?} is not a number")))?;
        if !(f > 0.0 && f < 1.0) {
            return Err(CliError::input("independent fraction must lie in (0,1)".into()));
        }
        return Ok(ModeChoice::Independent(f));
    }
    Err(CliError::input(format!(
        "unknown mode {s:?}; expected reuse or independent:FRAC"
    )))
}

pub fn parse_stochastic(s: &str) -> Result<(usize, usize), CliError> {
    let (r, b) = s
        .split_once(':')
        .ok_or_else(|| CliError::input(format!("stochastic {s:?} must look like RESTARTS:BUDGET")))?;
    let restarts = r
        .parse()
        .map_err(|_| CliError::input(format!("bad restart count {r:?}")))?;
    let budget: usize = b
        .parse()
        .map_err(|_| CliError::input(format!("bad budget {b:?}")))?;
    if budget == 0 {
        return Err(CliError::input("stochastic budget must be positive".into()));
    }
    Ok((restarts, budget))
}

pub fn parse_order(s: &str) -> Result<NeighborOrder, CliError> {
    match s {
        "canonical" => Ok(NeighborOrder::Canonical),
        "cheapest" => Ok(NeighborOrder::CheapestFirst),
        other => Err(CliError::input(format!(
            "unknown neighbor order {other:?}; expected canonical or cheapest"
        ))),
    }
}

/// Applies `key = value` lines from a config file; later flags override.
pub fn apply_config_file(config: &mut RunConfig, text: &str, path: &str) -> Result<(), CliError> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::input(format!("{path}:{}: expected key = value", lineno + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let at = |e: CliError| CliError::input(format!("{path}:{}: {}", lineno + 1, e.message));
        match key {
            "space" => config.space = parse_space(value).map_err(at)?,
            "estimator" => config.estimator = parse_estimator(value).map_err(at)?,
            "mode" => config.mode = parse_mode(value).map_err(at)?,
            "seed" => {
                config.seed = value
                    .parse()
                    .map_err(|_| CliError::input(format!("{path}:{}: bad seed", lineno + 1)))?
            }
            "fallback" => {
                config.fallback = value
                    .parse()
                    .map_err(|_| CliError::input(format!("{path}:{}: bad fallback", lineno + 1)))?
            }
            "stochastic" => config.stochastic = Some(parse_stochastic(value).map_err(at)?),
            "order" => config.order = parse_order(value).map_err(at)?,
            "prune_worse" => config.prune_worse = parse_bool(value, path, lineno)?,
            "convexity_prune" => config.convexity_prune = parse_bool(value, path, lineno)?,
            "cap" => {
                config.cap = value
                    .parse()
                    .map_err(|_| CliError::input(format!("{path}:{}: bad cap", lineno + 1)))?
            }
            "tie" => {
                config.tie = match value {
                    "one" => TieRule::PreferOne,
                    "zero" => TieRule::PreferZero,
                    _ => {
                        return Err(CliError::input(format!(
                            "{path}:{}: tie must be one or zero",
                            lineno + 1
                        )))
                    }
                }
            }
            other => {
                return Err(CliError::input(format!(
                    "{path}:{}: unknown config key {other:?}",
                    lineno + 1
                )))
            }
        }
    }
    Ok(())
}

fn parse_bool(value: &str, path: &str, lineno: usize) -> Result<bool, CliError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(CliError::input(format!(
            "{path}:{}: expected true or false",
            lineno + 1
        ))),
    }
}
