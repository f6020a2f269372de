//! JSON experiment configuration and its resolution into core types.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use baro_core::adversary::{self, AdversaryStrategy, DensityTopper, ObservationMode};
use baro_core::rng::Rng;
use baro_core::{AlgoConstants, Item, ModelParams};

use crate::CliError;

/// Domain-separation constant so pool generation and trial permutations
/// draw from unrelated streams of the same base seed.
const POOL_SEED_SALT: u64 = 0x504F_4F4C_5345_4544; // "POOLSEED"

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmChoice {
    Baro,
    Primal,
    Topk,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PoolConfig {
    /// Every pool item is `(value 1, weight 1)`.
    Unit,
    /// Values uniform in `(0, value_max]`, weights uniform in
    /// `[weight_min, weight_max]`.
    Uniform {
        value_max: f64,
        weight_min: f64,
        weight_max: f64,
    },
}

impl PoolConfig {
    fn build(&self, len: usize, seed: u64) -> Result<Vec<Item>, CliError> {
        match *self {
            PoolConfig::Unit => Ok(vec![
                Item {
                    value: 1.0,
                    weight: 1.0
                };
                len
            ]),
            PoolConfig::Uniform {
                value_max,
                weight_min,
                weight_max,
            } => {
                if !(value_max > 0.0
                    && weight_min > 0.0
                    && weight_min <= weight_max
                    && weight_max <= 1.0)
                {
                    return Err(CliError::config(format!(
                        "uniform pool needs value_max > 0 and 0 < weight_min <= weight_max <= 1, \
                         got value_max={value_max}, weight_min={weight_min}, weight_max={weight_max}"
                    )));
                }
                let mut rng = Rng::new(seed);
                Ok((0..len)
                    .map(|_| Item {
                        value: rng.open_closed(value_max),
                        weight: rng.range(weight_min, weight_max),
                    })
                    .collect())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum PatternConfig {
    /// No adversary (requires `gamma = 0`); the pool is explicit.
    PureRo { pool: PoolConfig },
    /// Leading burst of increasing-infinitesimal unit items; unit pool.
    TooMany,
    /// Leading burst of `(1 + eps)` unit items; unit pool.
    TooFew { eps: f64 },
    /// Leading burst of `hi`-value items; pool values uniform in
    /// `(0, lo_max]`, unit weight.
    KleinbergKiller { hi: f64, lo_max: f64 },
    /// Adaptive adversary topping the best realized pool density.
    DensityTopper { pool: PoolConfig },
}

impl PatternConfig {
    pub fn name(&self) -> &'static str {
        match self {
            PatternConfig::PureRo { .. } => "pure_ro",
            PatternConfig::TooMany => "too_many",
            PatternConfig::TooFew { .. } => "too_few",
            PatternConfig::KleinbergKiller { .. } => "kleinberg_killer",
            PatternConfig::DensityTopper { .. } => "density_topper",
        }
    }

    /// Burst patterns must sit on a front cover sized for `k`.
    fn needs_front_cover(&self) -> bool {
        matches!(
            self,
            PatternConfig::TooMany
                | PatternConfig::TooFew { .. }
                | PatternConfig::KleinbergKiller { .. }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileName {
    Paper,
    Practical,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ConstantsConfig {
    Profile {
        profile: ProfileName,
    },
    Explicit {
        a1: f64,
        a4: f64,
        scale_budget: bool,
    },
}

impl ConstantsConfig {
    pub fn resolve(&self) -> Result<AlgoConstants, CliError> {
        match *self {
            ConstantsConfig::Profile {
                profile: ProfileName::Paper,
            } => Ok(AlgoConstants::paper()),
            ConstantsConfig::Profile {
                profile: ProfileName::Practical,
            } => Ok(AlgoConstants::practical()),
            ConstantsConfig::Explicit {
                a1,
                a4,
                scale_budget,
            } => AlgoConstants::new(a1, a4, scale_budget).map_err(CliError::from_core),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum CoverConfig {
    Named(CoverName),
    Explicit { explicit: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverName {
    Front,
    Scattered,
}

fn default_cover() -> CoverConfig {
    CoverConfig::Named(CoverName::Front)
}

fn default_constants() -> ConstantsConfig {
    ConstantsConfig::Profile {
        profile: ProfileName::Practical,
    }
}

/// One experiment: model geometry, adversary pattern, algorithm,
/// constants, and the trial/seed plan. All randomness flows from
/// `base_seed` (trial `i` uses `base_seed + i`; pool generation uses a
/// salted stream of `base_seed`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: f64,
    pub gamma: usize,
    /// Window size override; default `ceil(n ln k / k)`.
    #[serde(default)]
    pub ell: Option<usize>,
    #[serde(default = "default_cover")]
    pub cover: CoverConfig,
    pub pattern: PatternConfig,
    pub algorithm: AlgorithmChoice,
    #[serde(default = "default_constants")]
    pub constants: ConstantsConfig,
    pub trials: usize,
    pub base_seed: u64,
    /// Restrict adaptive adversaries to the algorithm's history (hide the
    /// realized pool order).
    #[serde(default)]
    pub history_only_adversary: bool,
    /// Error out instead of warning when below the analysis regime.
    #[serde(default)]
    pub strict_paper_regime: bool,
}

/// A config resolved into concrete core inputs, ready to run.
pub struct ResolvedExperiment {
    pub params: ModelParams,
    pub pool: Vec<Item>,
    pub strategy: AdversaryStrategy,
    pub adaptive: Option<DensityTopper>,
    pub algorithm: AlgorithmChoice,
    pub constants: AlgoConstants,
    pub trials: usize,
    pub base_seed: u64,
    pub observation: ObservationMode,
}

impl ExperimentConfig {
    pub fn resolve(&self) -> Result<ResolvedExperiment, CliError> {
        if self.trials == 0 {
            return Err(CliError::config("trials must be >= 1"));
        }
        let ell = self
            .ell
            .unwrap_or_else(|| ModelParams::default_ell(self.n, self.k));

        let window_count = self.n.div_ceil(ell);
        let cover: BTreeSet<usize> = if self.pattern.needs_front_cover() {
            let need = (self.k / ell as f64).ceil() as usize;
            if need > self.gamma {
                return Err(CliError::config(format!(
                    "pattern {} needs the first ceil(k/ell) = {need} windows covered but gamma = {}",
                    self.pattern.name(),
                    self.gamma
                )));
            }
            adversary::cover_front(need)
        } else if self.gamma == 0 {
            BTreeSet::new()
        } else {
            match &self.cover {
                CoverConfig::Named(CoverName::Front) => adversary::cover_front(self.gamma),
                CoverConfig::Named(CoverName::Scattered) => {
                    if self.gamma > window_count {
                        return Err(CliError::config("gamma exceeds the window count"));
                    }
                    adversary::cover_scattered(self.gamma, window_count)
                }
                CoverConfig::Explicit { explicit } => explicit.iter().copied().collect(),
            }
        };

        let params = ModelParams::new(self.n, self.k, self.gamma, cover, Some(ell))
            .map_err(CliError::from_core)?;
        if self.strict_paper_regime {
            params.validate_strict().map_err(CliError::from_core)?;
        } else {
            for w in params.paper_regime_warnings() {
                eprintln!("warning: {w}");
            }
        }

        let pool_len = self.n - params.covered_time_count();
        let pool_seed = self.base_seed ^ POOL_SEED_SALT;
        let (pool, strategy, adaptive) = match &self.pattern {
            PatternConfig::PureRo { pool } => {
                if self.gamma != 0 {
                    return Err(CliError::config("pure_ro requires gamma = 0"));
                }
                (
                    pool.build(pool_len, pool_seed)?,
                    AdversaryStrategy::Static(Vec::new()),
                    None,
                )
            }
            PatternConfig::TooMany => {
                let (pool, strategy) =
                    adversary::gen_too_many(&params).map_err(CliError::from_core)?;
                (pool, strategy, None)
            }
            PatternConfig::TooFew { eps } => {
                let (pool, strategy) =
                    adversary::gen_too_few(&params, *eps).map_err(CliError::from_core)?;
                (pool, strategy, None)
            }
            PatternConfig::KleinbergKiller { hi, lo_max } => {
                let (pool, strategy) =
                    adversary::gen_kleinberg_killer(&params, *hi, *lo_max, pool_seed)
                        .map_err(CliError::from_core)?;
                (pool, strategy, None)
            }
            PatternConfig::DensityTopper { pool } => {
                if params.covered_time_count() == 0 {
                    return Err(CliError::config(
                        "density_topper needs a non-empty cover (gamma >= 1)",
                    ));
                }
                let (rule, strategy) = adversary::gen_density_topper();
                (pool.build(pool_len, pool_seed)?, strategy, Some(rule))
            }
        };

        if adaptive.is_some() && self.algorithm != AlgorithmChoice::Baro {
            return Err(CliError::config(
                "adaptive adversaries are only supported with the baro algorithm",
            ));
        }

        Ok(ResolvedExperiment {
            params,
            pool,
            strategy,
            adaptive,
            algorithm: self.algorithm,
            constants: self.constants.resolve()?,
            trials: self.trials,
            base_seed: self.base_seed,
            observation: if self.history_only_adversary {
                ObservationMode::HistoryOnly
            } else {
                ObservationMode::FullSchedule
            },
        })
    }
}

/// Sweep: a base experiment crossed with grids over `k`, `gamma`, and
/// optionally the pattern. `n_per_k` rescales the horizon with `k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: ExperimentConfig,
    pub k: Vec<f64>,
    #[serde(default)]
    pub gamma: Option<Vec<usize>>,
    #[serde(default)]
    pub patterns: Option<Vec<PatternConfig>>,
    #[serde(default)]
    pub n_per_k: Option<usize>,
}

impl SweepConfig {
    /// The cross-product of grid points, in deterministic row order.
    pub fn grid(&self) -> Result<Vec<ExperimentConfig>, CliError> {
        let gammas = self.gamma.clone().unwrap_or_else(|| vec![self.base.gamma]);
        let patterns = self
            .patterns
            .clone()
            .unwrap_or_else(|| vec![self.base.pattern.clone()]);
        if self.k.is_empty() || gammas.is_empty() || patterns.is_empty() {
            return Err(CliError::config("sweep grid is empty"));
        }
        let mut out = Vec::new();
        for &k in &self.k {
            for &gamma in &gammas {
                for pattern in &patterns {
                    let mut cfg = self.base.clone();
                    cfg.k = k;
                    cfg.gamma = gamma;
                    cfg.pattern = pattern.clone();
                    if let Some(f) = self.n_per_k {
                        cfg.n = (f as f64 * k).ceil() as usize;
                        cfg.ell = None;
                    }
                    out.push(cfg);
                }
            }
        }
        Ok(out)
    }
}

/// Parse a JSON config with line-anchored error messages.
pub fn parse_config<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        CliError::config(format!(
            "config error at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}
