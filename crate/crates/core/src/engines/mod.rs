//! The three schedulers, blocking strategies, the potential and the degree
//! splitting wrapper.
//!
//! Repairs that would run simultaneously in a round are executed one after
//! another inside a *wave*. Every item in a wave is planned against the same
//! coloring, blocking edges are chosen from the same load snapshot, and the
//! admission check keeps paths vertex-disjoint, so execution order does not
//! change the result.

mod alg1;
mod alg2;
mod alg4;
pub mod merge;
pub mod params;
pub mod potential;
pub mod report;
pub mod split;
pub mod strategy;
mod wave;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::fans::FanError;
use crate::graph::Graph;
use crate::locality::LocalityError;
use crate::palette::{Color, ColoringError, MissingPolicy, PartialColoring, Violation};

pub use merge::MergeEvent;
pub use report::{IterationRecord, RunReport};
pub use strategy::BlockingStrategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Alg1,
    Alg2,
    Alg4,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Alg1, Algorithm::Alg2, Algorithm::Alg4];

    /// Required fraction of uncolored edges colored per outer iteration.
    pub fn progress_denominator(self) -> usize {
        match self {
            Algorithm::Alg1 => 4,
            Algorithm::Alg2 => 16,
            Algorithm::Alg4 => 8,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Alg1 => "alg1",
            Algorithm::Alg2 => "alg2",
            Algorithm::Alg4 => "alg4",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "alg1" => Ok(Algorithm::Alg1),
            "alg2" => Ok(Algorithm::Alg2),
            "alg4" => Ok(Algorithm::Alg4),
            _ => Err(format!("unknown algorithm `{s}` (expected alg1, alg2 or alg4)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    Uniform,
    RandomEmpty,
    Greedy,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 3] = [StrategyKind::Uniform, StrategyKind::RandomEmpty, StrategyKind::Greedy];

    pub fn is_randomized(self) -> bool {
        self != StrategyKind::Greedy
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrategyKind::Uniform => "uniform",
            StrategyKind::RandomEmpty => "empty",
            StrategyKind::Greedy => "greedy",
        })
    }
}

impl FromStr for StrategyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(StrategyKind::Uniform),
            "empty" | "random_empty" => Ok(StrategyKind::RandomEmpty),
            "greedy" => Ok(StrategyKind::Greedy),
            _ => Err(format!("unknown strategy `{s}` (expected uniform, empty or greedy)")),
        }
    }
}

/// How much checking happens during a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssertLevel {
    /// After every single repair.
    Debug,
    /// After every wave.
    Standard,
    /// Once, at the end.
    Fast,
}

impl FromStr for AssertLevel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "debug" => Ok(AssertLevel::Debug),
            "standard" => Ok(AssertLevel::Standard),
            "fast" => Ok(AssertLevel::Fast),
            _ => Err(format!("unknown assertion level `{s}`")),
        }
    }
}

/// When random-empty placement gives up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreezeMode {
    /// Only when no edge of `P(T)` has two unloaded endpoints.
    Permissive,
    /// When fewer than `T/15` edges of `P(T)` qualify.
    Strict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub strategy: StrategyKind,
    /// Explicit truncation length; `None` uses the parameter formula.
    pub t: Option<u64>,
    pub lambda: f64,
    pub seed: Option<u64>,
    pub assert_level: AssertLevel,
    pub freeze: FreezeMode,
    pub policy: MissingPolicy,
    /// Executes the items of each wave in an order shuffled with this seed.
    pub shuffle_waves: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algorithm: Algorithm::Alg1,
            strategy: StrategyKind::Greedy,
            t: None,
            lambda: 2.0,
            seed: None,
            assert_level: AssertLevel::Standard,
            freeze: FreezeMode::Permissive,
            policy: MissingPolicy::Lowest,
            shuffle_waves: None,
        }
    }
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, strategy: StrategyKind) -> Self {
        RunConfig {
            algorithm,
            strategy,
            ..RunConfig::default()
        }
    }

    pub fn with_t(mut self, t: u64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_assert(mut self, level: AssertLevel) -> Self {
        self.assert_level = level;
        self
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("alg4 needs a bipartite graph")]
    NotBipartite,
    #[error("strategy `{0}` is randomized and needs a seed")]
    MissingSeed(StrategyKind),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("iteration {iteration} colored nothing ({uncolored} edges left)")]
    Stalled { iteration: usize, uncolored: usize },
    #[error("coloring is not proper: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Improper(Vec<Violation>),
    #[error("bookkeeping audit failed: {0}")]
    Audit(String),
    #[error("potential rose at execution {q}: ln Φ went from {before} to {after}")]
    PotentialIncrease { q: u64, before: f64, after: f64 },
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Locality(#[from] LocalityError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Strategy(#[from] strategy::StrategyError),
}

/// Counters that are not part of the JSON report.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunStats {
    pub waves: u64,
    /// Items pushed to an extra wave because they clashed with an admitted one.
    pub spillovers: u64,
    /// Items skipped because an earlier repair invalidated them.
    pub destroyed: u64,
    pub closes: u64,
    pub case1: u64,
    pub case2: u64,
    pub blocked: u64,
    pub direct: u64,
    pub augmented: u64,
    pub semi_destroyed: u64,
    /// Number of full properness checks performed during the run.
    pub verifications: u64,
}

impl RunStats {
    pub fn repairs(&self) -> u64 {
        self.closes + self.case1 + self.case2 + self.blocked + self.direct + self.augmented
    }
}

pub struct RunOutcome<'g> {
    /// The coloring before ★ edges get fresh colors.
    pub coloring: PartialColoring<'g>,
    /// Final colors, one per edge; `None` when the run froze.
    pub colors: Option<Vec<Color>>,
    pub report: RunReport,
    pub stats: RunStats,
    pub merge_events: Vec<MergeEvent>,
    /// Largest relative drift between incremental and recomputed Φ.
    pub phi_drift: f64,
}

/// Runs the configured algorithm to completion (or until a random-empty
/// freeze, reported through `report.failed`).
pub fn run<'g>(g: &'g Graph, config: &RunConfig) -> Result<RunOutcome<'g>, EngineError> {
    if config.strategy.is_randomized() && config.seed.is_none() {
        return Err(EngineError::MissingSeed(config.strategy));
    }
    if config.lambda.is_nan() || config.lambda < 1.0 || !config.lambda.is_finite() {
        return Err(EngineError::Parameter(format!(
            "λ = {} must be at least 1",
            config.lambda
        )));
    }
    if config.t == Some(0) {
        return Err(EngineError::Parameter("T must be at least 1".into()));
    }
    if config.algorithm == Algorithm::Alg4 && !g.is_bipartite() {
        return Err(EngineError::NotBipartite);
    }
    let mut runner = wave::Runner::new(g, config);
    match config.algorithm {
        Algorithm::Alg1 => alg1::run(&mut runner)?,
        Algorithm::Alg2 => alg2::run(&mut runner)?,
        Algorithm::Alg4 => alg4::run(&mut runner)?,
    }
    runner.finish()
}
