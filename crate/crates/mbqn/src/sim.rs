//! Stochastic capacity experiment: tasks with uniformly random endpoint
//! pairs arrive one at a time and are admitted while the active set stays
//! compatible under the chosen measure. The first rejection ends the trial
//! and the size of the surviving set is the trial's score.

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::compat::{gk_compatible, worst_case_compatible};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::task::Task;
use crate::topology::TopologyFamily;

/// Admission rule for a trial. Baseline admits a single task per resource
/// state; the other two admit while the whole set passes the corresponding
/// compatibility check, with `Gk(0)` coinciding with `WorstCase` exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Measure {
    Baseline,
    WorstCase,
    Gk(usize),
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Measure::Baseline => write!(f, "baseline"),
            Measure::WorstCase => write!(f, "worst_case"),
            Measure::Gk(k) => write!(f, "gk:{k}"),
        }
    }
}

impl std::str::FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Measure::Baseline),
            "worst_case" => Ok(Measure::WorstCase),
            _ => match s.strip_prefix("gk:").and_then(|k| k.parse::<usize>().ok()) {
                Some(k) => Ok(Measure::Gk(k)),
                None => Err(Error::InvalidConfig(format!(
                    "unknown measure `{s}` (expected baseline, worst_case, or gk:K)"
                ))),
            },
        }
    }
}

impl Serialize for Measure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Measure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

pub const DEFAULT_SIZES: [usize; 8] = [4, 8, 12, 16, 24, 32, 48, 64];
pub const DEFAULT_TRIALS: u64 = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub family: TopologyFamily,
    pub sizes: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub measures: Vec<Measure>,
    /// When set, every measure sees the same task sequence in a given
    /// trial, so per-trial scores are directly comparable.
    pub shared_streams: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            family: TopologyFamily::Path,
            sizes: DEFAULT_SIZES.to_vec(),
            trials: DEFAULT_TRIALS,
            seed: 1,
            measures: vec![Measure::Baseline, Measure::WorstCase, Measure::Gk(1)],
            shared_streams: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    /// Size of the last compatible set; the rejected arrival is not counted.
    pub supported: u64,
    pub rejected: Task,
}

/// A task with endpoints drawn uniformly from all n(n-1) ordered pairs of
/// distinct vertices of the 1..=n vertex range.
pub fn sample_task(n: usize, rng: &mut impl Rng) -> Result<Task> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 vertices to sample a task, got {n}")));
    }
    let n = n as u32;
    let origin = rng.random_range(1..=n);
    let mut target = rng.random_range(1..n);
    if target >= origin {
        target += 1;
    }
    Task::new(origin, target)
}

fn admits(g: &Graph, set: &[Task], measure: Measure) -> Result<bool> {
    match measure {
        Measure::Baseline => Ok(set.len() == 1),
        Measure::WorstCase => Ok(worst_case_compatible(g, set, None)?.is_compatible()),
        Measure::Gk(k) => Ok(gk_compatible(g, set, k, None)?.0.is_compatible()),
    }
}

fn run_trial_with(
    g: &Graph,
    measure: Measure,
    mut next: impl FnMut() -> Result<Task>,
) -> Result<TrialOutcome> {
    let mut set: Vec<Task> = Vec::new();
    loop {
        let candidate = next()?;
        set.push(candidate);
        if !admits(g, &set, measure)? {
            return Ok(TrialOutcome { supported: (set.len() - 1) as u64, rejected: candidate });
        }
    }
}

/// One arrival sequence under one admission rule. Termination is sure in
/// distribution: a repeated pair can never stay disjoint, and pairs are
/// drawn with replacement from a finite set.
pub fn run_trial(g: &Graph, measure: Measure, rng: &mut impl Rng) -> Result<TrialOutcome> {
    run_trial_with(g, measure, || sample_task(g.vertex_count(), rng))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

fn measure_tag(measure: Measure) -> u64 {
    match measure {
        Measure::Baseline => 1,
        Measure::WorstCase => 2,
        Measure::Gk(k) => 3 + k as u64,
    }
}

/// Derives the independent substream for one trial. The chain absorbs the
/// experiment seed, the network size, the measure (collapsed to a common
/// tag when streams are shared), and the trial index, so any worker can
/// reproduce any trial in isolation.
pub fn trial_rng(seed: u64, n: usize, measure: Measure, shared: bool, trial: u64) -> ChaCha8Rng {
    let tag = if shared { 0 } else { measure_tag(measure) };
    let mut s = splitmix64(seed);
    s = splitmix64(s ^ n as u64);
    s = splitmix64(s ^ tag);
    s = splitmix64(s ^ trial);
    ChaCha8Rng::seed_from_u64(s)
}

/// All trials for one (size, measure) cell, in trial order. Trials run in
/// parallel; the fixed substream per index keeps the result independent of
/// scheduling.
pub fn run_trials(
    g: &Graph,
    measure: Measure,
    trials: u64,
    seed: u64,
    shared_streams: bool,
) -> Result<Vec<TrialOutcome>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, g.vertex_count(), measure, shared_streams, t);
            run_trial(g, measure, &mut rng)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub n: usize,
    pub measure: Measure,
    pub mean: f64,
    pub sem: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Aggregates scores with integer sums so the reported floats are an exact
/// function of the outcomes, independent of summation order.
fn summarize(n: usize, measure: Measure, seed: u64, outcomes: &[TrialOutcome]) -> StatsRecord {
    let t = outcomes.len() as u64;
    let sum: u64 = outcomes.iter().map(|o| o.supported).sum();
    let sum_sq: u64 = outcomes.iter().map(|o| o.supported * o.supported).sum();
    let mean = sum as f64 / t as f64;
    let sem = if t > 1 {
        let numerator = (t as u128 * sum_sq as u128 - (sum as u128).pow(2)) as f64;
        (numerator / (t as u128 * t as u128 * (t as u128 - 1)) as f64).sqrt()
    } else {
        0.0
    };
    StatsRecord { n, measure, mean, sem, trials: t, seed }
}

/// The full sweep: one record per configured (size, measure) pair, sizes
/// outermost, in the order given.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<StatsRecord>> {
    if cfg.trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if cfg.sizes.is_empty() || cfg.measures.is_empty() {
        return Err(Error::InvalidConfig("need at least one size and one measure".into()));
    }
    if let Some(&n) = cfg.sizes.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidConfig(format!("network size must be at least 2, got {n}")));
    }
    let mut records = Vec::with_capacity(cfg.sizes.len() * cfg.measures.len());
    for &n in &cfg.sizes {
        let g = cfg.family.build(n)?;
        for &measure in &cfg.measures {
            let outcomes = run_trials(&g, measure, cfg.trials, cfg.seed, cfg.shared_streams)?;
            records.push(summarize(n, measure, cfg.seed, &outcomes));
        }
    }
    Ok(records)
}
