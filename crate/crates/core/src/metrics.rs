//! Accuracy statistics and Monte-Carlo sweeps over dimension and shot count.

use alloc::vec::Vec;

#[allow(unused_imports)] // the methods are inherent when std is linked
use num_traits::Float;

use crate::basis::{canonical, five_bases, three_bases, OrthonormalBasis, PairBasisParams, ThreeBasisSet};
use crate::error::{check_dimension, Error, Result};
use crate::measure::{exact_probs, sample_counts};
use crate::reconstruct::{
    estimate_3bb, estimate_3bb_with_retry, estimate_5bb_report, EstimationReport, EstimatorOptions,
    FiveBasisObservations, RetryOptions, StateSource, SignVector,
};
use crate::seed::{derive_seed, stream};
use crate::state::{haar_random, infidelity, PureState};

pub use crate::reconstruct::Method;

pub fn trial_average_infidelity(truth: &PureState, estimates: &[PureState]) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut total = 0.0;
    for e in estimates {
        total += infidelity(truth, e)?;
    }
    Ok(total / estimates.len() as f64)
}

/// True iff some chosen sign disagrees with the sign of a true imaginary
/// part larger than `tol` in magnitude.
pub fn sign_disagreement(signs: &SignVector, truth: &PureState, tol: f64) -> Result<bool> {
    let d = truth.dim();
    if signs.len() + 1 != d {
        return Err(Error::DimensionMismatch {
            expected: d - 1,
            found: signs.len(),
        });
    }
    let lambdas = truth.pair_correlators();
    Ok(lambdas[..d - 1].iter().zip(&signs.0).any(|(l, &s)| {
        l.im.abs() > tol && (if l.im > 0.0 { 1 } else { -1 }) != s
    }))
}

pub fn omega_f_flag(report: &EstimationReport, truth: &PureState, tol: f64) -> Result<bool> {
    if report.estimate.dim() != truth.dim() {
        return Err(Error::DimensionMismatch {
            expected: truth.dim(),
            found: report.estimate.dim(),
        });
    }
    sign_disagreement(&report.chosen_signs, truth, tol)
}

/// Default sign tolerance `2 / sqrt(N)`.
pub fn default_sign_tol(shots: u64) -> f64 {
    2.0 / (shots as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Mean and linearly interpolated quartiles.
pub fn aggregate_stats(values: &[f64]) -> Result<Stats> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(Stats {
        mean: values.iter().sum::<f64>() / values.len() as f64,
        median: quantile(&sorted, 0.5),
        q25: quantile(&sorted, 0.25),
        q75: quantile(&sorted, 0.75),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RetryPolicy {
    /// Keep the fixed bases for every state.
    None,
    Randomize { max_retries: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub dimensions: Vec<usize>,
    pub shots_grid: Vec<u64>,
    /// Number of Haar states per dimension.
    pub states: usize,
    /// Repetitions per state.
    pub trials: usize,
    pub seed: u64,
    pub method: Method,
    pub retry: RetryPolicy,
}

impl SweepConfig {
    pub fn new(dimensions: Vec<usize>, shots_grid: Vec<u64>, states: usize, trials: usize, seed: u64) -> Self {
        Self {
            dimensions,
            shots_grid,
            states,
            trials,
            seed,
            method: Method::ThreeBases,
            retry: RetryPolicy::None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimensions.is_empty() || self.shots_grid.is_empty() {
            return Err(Error::InvalidConfig("dimensions and shots must be non-empty"));
        }
        for &d in &self.dimensions {
            check_dimension(d)?;
        }
        if self.shots_grid.contains(&0) {
            return Err(Error::InvalidConfig("shots must be at least 1"));
        }
        if self.states == 0 || self.trials == 0 {
            return Err(Error::InvalidConfig("states and trials must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub d: usize,
    pub shots: u64,
    pub total_ensemble: u64,
    pub mean: f64,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub omega_f_fraction: f64,
    /// Mean trial infidelity inside the sign-disagreement set (NaN if empty).
    pub omega_f_mean: f64,
    /// Mean trial infidelity outside it (NaN if empty).
    pub complement_mean: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub infidelity: f64,
    pub omega_f: bool,
}

/// Outcomes of the `n` trials of one state; failed trials are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTrials {
    pub outcomes: Vec<Option<TrialOutcome>>,
}

/// Fixed data shared by all trials of one dimension.
#[derive(Debug, Clone)]
pub struct DimensionPlan {
    pub d: usize,
    pub states: Vec<PureState>,
    bases: PlanBases,
}

#[derive(Debug, Clone)]
enum PlanBases {
    Three(ThreeBasisSet),
    Five {
        params: PairBasisParams,
        bases: Vec<OrthonormalBasis>,
    },
}

impl DimensionPlan {
    /// Haar states use `derive_seed(seed, [STATE, d, j])`, independent of
    /// the shot count, so every grid point sees the same states.
    pub fn new(config: &SweepConfig, d: usize) -> Result<Self> {
        check_dimension(d)?;
        let states = (0..config.states)
            .map(|j| haar_random(d, derive_seed(config.seed, &[stream::STATE, d as u64, j as u64])))
            .collect::<Result<Vec<_>>>()?;
        let params = PairBasisParams::balanced(d);
        let bases = match config.method {
            Method::ThreeBases => PlanBases::Three(three_bases(d, &params)?),
            Method::FiveBases => {
                let mut bases = alloc::vec![canonical(d)?];
                bases.extend(five_bases(d, &params)?);
                PlanBases::Five { params, bases }
            }
        };
        Ok(Self { d, states, bases })
    }

    /// Trial `i` of state `j` at `shots` per basis; all randomness comes from
    /// `derive_seed(seed, [TRIAL, d, shots, j, i])`.
    pub fn run_trial(&self, config: &SweepConfig, shots: u64, j: usize, i: usize) -> Result<TrialOutcome> {
        let truth = &self.states[j];
        let trial_seed = derive_seed(
            config.seed,
            &[stream::TRIAL, self.d as u64, shots, j as u64, i as u64],
        );
        // Haar states have full support, so a zero count is noise and must
        // not split the support.
        let opts = EstimatorOptions {
            zero_eps: Some(0.0),
            ..EstimatorOptions::default()
        };
        let report = match &self.bases {
            PlanBases::Three(bases) => match config.retry {
                RetryPolicy::None => {
                    let records = bases
                        .bases()
                        .into_iter()
                        .enumerate()
                        .map(|(b, basis)| {
                            sample_counts(&exact_probs(truth, basis)?, shots, derive_seed(trial_seed, &[b as u64]))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    estimate_3bb(&records, bases, &opts)?
                }
                RetryPolicy::Randomize { max_retries } => {
                    let retry = RetryOptions {
                        max_retries,
                        ..RetryOptions::default()
                    };
                    let src = StateSource::Simulated {
                        state: truth,
                        shots: Some(shots),
                        bases,
                    };
                    match estimate_3bb_with_retry(src, trial_seed, &retry, &opts) {
                        Ok(r) => r,
                        Err(Error::RetriesExhausted { report, .. }) => *report,
                        Err(e) => return Err(e),
                    }
                }
            },
            PlanBases::Five { params, bases } => {
                let records = bases
                    .iter()
                    .enumerate()
                    .map(|(b, basis)| {
                        sample_counts(&exact_probs(truth, basis)?, shots, derive_seed(trial_seed, &[b as u64]))
                    })
                    .collect::<Result<Vec<_>>>()?;
                estimate_5bb_report(&FiveBasisObservations::from_counts(&records)?, params, &opts)?
            }
        };
        Ok(TrialOutcome {
            infidelity: infidelity(truth, &report.estimate)?,
            omega_f: omega_f_flag(&report, truth, default_sign_tol(shots))?,
        })
    }

    pub fn run_state(&self, config: &SweepConfig, shots: u64, j: usize) -> StateTrials {
        StateTrials {
            outcomes: (0..config.trials)
                .map(|i| self.run_trial(config, shots, j, i).ok())
                .collect(),
        }
    }
}

fn mean_or_nan(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

/// Aggregates per-state trial outcomes into one row. States whose trials
/// all failed are left out of the statistics.
pub fn summarize(d: usize, shots: u64, method: Method, per_state: &[StateTrials]) -> SweepRow {
    let mut averages = Vec::with_capacity(per_state.len());
    let mut failures = 0;
    let mut trials: Vec<TrialOutcome> = Vec::new();
    for st in per_state {
        let ok: Vec<TrialOutcome> = st.outcomes.iter().flatten().copied().collect();
        failures += st.outcomes.len() - ok.len();
        if !ok.is_empty() {
            averages.push(ok.iter().map(|t| t.infidelity).sum::<f64>() / ok.len() as f64);
        }
        trials.extend(ok);
    }
    let stats = aggregate_stats(&averages).unwrap_or(Stats {
        mean: f64::NAN,
        median: f64::NAN,
        q25: f64::NAN,
        q75: f64::NAN,
    });
    let in_omega = trials.iter().filter(|t| t.omega_f).count();
    SweepRow {
        d,
        shots,
        total_ensemble: method.bases() * shots,
        mean: stats.mean,
        median: stats.median,
        q25: stats.q25,
        q75: stats.q75,
        omega_f_fraction: if trials.is_empty() {
            f64::NAN
        } else {
            in_omega as f64 / trials.len() as f64
        },
        omega_f_mean: mean_or_nan(trials.iter().filter(|t| t.omega_f).map(|t| t.infidelity)),
        complement_mean: mean_or_nan(trials.iter().filter(|t| !t.omega_f).map(|t| t.infidelity)),
        failures,
    }
}

/// Sequential sweep; rows come out in `(d, N)` order.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &d in &config.dimensions {
        let plan = DimensionPlan::new(config, d)?;
        for &shots in &config.shots_grid {
            let per_state: Vec<StateTrials> = (0..config.states).map(|j| plan.run_state(config, shots, j)).collect();
            rows.push(summarize(d, shots, config.method, &per_state));
        }
    }
    Ok(rows)
}
