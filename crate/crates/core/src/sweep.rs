//! Seeded Monte Carlo verification of `U(A;ρ) + U(B;ρ) ≥ f(c²)`.
//!
//! Trial `t` of dimension `d` draws everything from
//! `trial_seed = seed ⊕ splitmix64((d << 32) | t)`:
//!
//! * `ρ` from sub-stream 1, `A` from sub-stream 2, `B` from sub-stream 3
//!   (sub-stream `s` has seed `trial_seed ⊕ splitmix64(s)`);
//! * for mixed trials the auxiliary dimension `K ∈ [2, d + 1]` is
//!   `2 + splitmix64(trial_seed ⊕ splitmix64(4)) mod d`;
//! * with `Mixedness::Both`, even `t` is pure and odd `t` mixed.
//!
//! Every metric is evaluated on the same `(ρ, A, B)`. Aggregation only takes
//! counts and minima (ties broken by trial position), so the result does not
//! depend on how trials are split across workers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::MetricKind;
use crate::states::{
    sample_mixed, sample_observable, splitmix64, stream_seed, DensityMatrix, ProjectiveObservable,
};
use crate::tolerances::UR_TOLERANCE;
use crate::uncertainty::{measure, URReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mixedness {
    Pure,
    Mixed,
    Both,
}

impl std::str::FromStr for Mixedness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(Mixedness::Pure),
            "mixed" => Ok(Mixedness::Mixed),
            "both" => Ok(Mixedness::Both),
            other => Err(Error::Domain(format!("unknown mixedness `{other}` (expected pure, mixed or both)"))),
        }
    }
}

fn default_tolerance() -> f64 {
    UR_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub dims: Vec<usize>,
    pub trials_per_dim: u64,
    pub seed: u64,
    pub kinds: Vec<MetricKind>,
    pub mixedness: Mixedness,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.iter().any(|&d| d < 2) {
            return Err(Error::Domain("dims must be a non-empty list of integers ≥ 2".into()));
        }
        if self.dims.iter().any(|&d| d > u32::MAX as usize) {
            return Err(Error::Domain("dimension too large".into()));
        }
        if self.trials_per_dim < 1 || self.trials_per_dim > u32::MAX as u64 {
            return Err(Error::Domain("trials_per_dim must be in [1, 2^32)".into()));
        }
        if self.kinds.is_empty() {
            return Err(Error::Domain("at least one metric kind is required".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Domain("tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// One sampled `(ρ, A, B)` triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialInstance {
    pub dim: usize,
    pub trial: u64,
    pub seed: u64,
    pub aux_dim: usize,
    pub rho: DensityMatrix,
    pub a: ProjectiveObservable,
    pub b: ProjectiveObservable,
}

pub fn trial_seed(seed: u64, dim: usize, trial: u64) -> u64 {
    stream_seed(seed, ((dim as u64) << 32) | trial)
}

pub fn trial_instance(seed: u64, dim: usize, trial: u64, mixedness: Mixedness) -> TrialInstance {
    let ts = trial_seed(seed, dim, trial);
    let pure = match mixedness {
        Mixedness::Pure => true,
        Mixedness::Mixed => false,
        Mixedness::Both => trial.is_multiple_of(2),
    };
    let aux_dim = if pure {
        1
    } else {
        2 + (splitmix64(stream_seed(ts, 4)) % dim as u64) as usize
    };
    TrialInstance {
        dim,
        trial,
        seed: ts,
        aux_dim,
        rho: sample_mixed(dim, aux_dim, stream_seed(ts, 1)),
        a: sample_observable(dim, stream_seed(ts, 2)),
        b: sample_observable(dim, stream_seed(ts, 3)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: MetricKind,
    pub dim: usize,
    pub trial: u64,
    pub seed: u64,
    pub aux_dim: usize,
    pub report: URReport,
    pub rho: DensityMatrix,
    pub a: ProjectiveObservable,
    pub b: ProjectiveObservable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindSummary {
    pub kind: MetricKind,
    pub trials: u64,
    pub violations: u64,
    pub min_slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub total_trials: u64,
    pub violations: u64,
    pub min_slack: f64,
    pub min_slack_witness: Witness,
    pub by_kind: Vec<KindSummary>,
}

/// Running minimum with its position, ordered by `(slack, dim index, trial, kind index)`.
#[derive(Debug, Clone, Copy)]
struct MinEntry {
    slack: f64,
    key: (usize, u64, usize),
}

impl MinEntry {
    fn better(self, other: MinEntry) -> MinEntry {
        match self.slack.total_cmp(&other.slack) {
            std::cmp::Ordering::Less => self,
            std::cmp::Ordering::Greater => other,
            std::cmp::Ordering::Equal => {
                if self.key <= other.key {
                    self
                } else {
                    other
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Tally {
    violations: Vec<u64>,
    mins: Vec<Option<MinEntry>>,
}

impl Tally {
    fn new(kinds: usize) -> Self {
        Self { violations: vec![0; kinds], mins: vec![None; kinds] }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for k in 0..self.violations.len() {
            self.violations[k] += other.violations[k];
            self.mins[k] = match (self.mins[k], other.mins[k]) {
                (Some(a), Some(b)) => Some(a.better(b)),
                (a, b) => a.or(b),
            };
        }
        self
    }
}

fn run_trial(config: &SweepConfig, dim_index: usize, trial: u64) -> Result<Tally> {
    let dim = config.dims[dim_index];
    let inst = trial_instance(config.seed, dim, trial, config.mixedness);
    let m = measure(&inst.a, &inst.b, &inst.rho)?;
    let mut tally = Tally::new(config.kinds.len());
    for (k, kind) in config.kinds.iter().enumerate() {
        let report = URReport::from_measurement(kind, &m)?;
        if report.slack < -config.tolerance {
            tally.violations[k] += 1;
        }
        tally.mins[k] = Some(MinEntry { slack: report.slack, key: (dim_index, trial, k) });
    }
    Ok(tally)
}

/// Runs the sweep on `workers` threads (`1` runs on the calling thread).
/// `progress(dim, trials)` is called after each dimension completes.
pub fn run_sweep(
    config: &SweepConfig,
    workers: usize,
    progress: &(dyn Fn(usize, u64) + Sync),
) -> Result<SweepResult> {
    config.validate()?;
    let n_kinds = config.kinds.len();
    let mut total = Tally::new(n_kinds);

    let pool = if workers > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?,
        )
    } else {
        None
    };

    for (dim_index, &dim) in config.dims.iter().enumerate() {
        let trials = 0..config.trials_per_dim;
        let tally = match &pool {
            None => trials
                .map(|t| run_trial(config, dim_index, t))
                .try_fold(Tally::new(n_kinds), |acc, t| t.map(|t| acc.merge(t)))?,
            Some(pool) => pool.install(|| {
                trials
                    .into_par_iter()
                    .map(|t| run_trial(config, dim_index, t))
                    .try_reduce(|| Tally::new(n_kinds), |a, b| Ok(a.merge(b)))
            })?,
        };
        total = total.merge(tally);
        progress(dim, config.trials_per_dim);
    }

    let trials = config.trials_per_dim * config.dims.len() as u64;
    let by_kind: Vec<KindSummary> = config
        .kinds
        .iter()
        .enumerate()
        .map(|(k, &kind)| KindSummary {
            kind,
            trials,
            violations: total.violations[k],
            min_slack: total.mins[k].map_or(f64::INFINITY, |m| m.slack),
        })
        .collect();

    let overall = total
        .mins
        .iter()
        .flatten()
        .copied()
        .reduce(MinEntry::better)
        .expect("at least one trial and one kind");
    let (dim_index, trial, k) = overall.key;
    let kind = config.kinds[k];
    let inst = trial_instance(config.seed, config.dims[dim_index], trial, config.mixedness);
    let report = URReport::from_measurement(&kind, &measure(&inst.a, &inst.b, &inst.rho)?)?;

    Ok(SweepResult {
        total_trials: trials * n_kinds as u64,
        violations: total.violations.iter().sum(),
        min_slack: overall.slack,
        min_slack_witness: Witness {
            kind,
            dim: inst.dim,
            trial,
            seed: inst.seed,
            aux_dim: inst.aux_dim,
            report,
            rho: inst.rho,
            a: inst.a,
            b: inst.b,
        },
        by_kind,
    })
}
