//! Re-measurement with randomized pair bases when the canonical
//! probabilities look degenerate or the likelihood cannot separate
//! candidates.

use alloc::boxed::Box;
use alloc::vec::Vec;

use super::{estimate_3bb, estimate_3bb_exact, EstimationReport, EstimatorOptions};
use crate::basis::{random_three_bases, ThreeBasisSet};
use crate::error::{Error, Result};
use crate::measure::{exact_probs, sample_counts, CountRecord};
use crate::seed::{derive_seed, stream};
use crate::state::PureState;

#[derive(Debug, Clone, Copy)]
pub enum StateSource<'a> {
    /// A known state that can be measured again; `shots: None` uses exact
    /// probabilities.
    Simulated {
        state: &'a PureState,
        shots: Option<u64>,
        bases: &'a ThreeBasisSet,
    },
    /// Previously recorded data; it cannot be re-measured.
    Recorded {
        records: &'a [CountRecord],
        bases: &'a ThreeBasisSet,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetryOptions {
    pub max_retries: u32,
    /// Re-draw the bases when two disjoint pairs of canonical frequencies
    /// coincide, even without an observed tie.
    pub on_equal_pairs: bool,
}

impl Default for RetryOptions {
    fn default() -> Self {
        Self {
            max_retries: 3,
            on_equal_pairs: true,
        }
    }
}

/// Measurement of all three bases with the shot budget of the source.
/// Shots for basis `i` of attempt `attempt` use seed
/// `derive_seed(seed, [MEASURE, attempt, i])`.
pub fn measure_three(
    state: &PureState,
    bases: &ThreeBasisSet,
    shots: u64,
    seed: u64,
    attempt: u64,
) -> Result<Vec<CountRecord>> {
    bases
        .bases()
        .into_iter()
        .enumerate()
        .map(|(i, basis)| {
            let probs = exact_probs(state, basis)?;
            sample_counts(&probs, shots, derive_seed(seed, &[stream::MEASURE, attempt, i as u64]))
        })
        .collect()
}

fn estimate_once(
    state: &PureState,
    shots: Option<u64>,
    bases: &ThreeBasisSet,
    seed: u64,
    attempt: u64,
    opts: &EstimatorOptions,
) -> Result<EstimationReport> {
    match shots {
        None => {
            let probs = bases
                .bases()
                .into_iter()
                .map(|b| exact_probs(state, b))
                .collect::<Result<Vec<_>>>()?;
            estimate_3bb_exact(&probs, bases, opts)
        }
        Some(n) => estimate_3bb(&measure_three(state, bases, n, seed, attempt)?, bases, opts),
    }
}

/// Three-basis estimate that re-draws random bases (seeded by
/// `derive_seed(seed, [RETRY, r])`) and measures again while the result is
/// flagged. The equal-pair trigger only applies to the first attempt: the
/// canonical data does not change between attempts.
pub fn estimate_3bb_with_retry(
    source: StateSource<'_>,
    seed: u64,
    retry: &RetryOptions,
    opts: &EstimatorOptions,
) -> Result<EstimationReport> {
    let (state, shots, bases) = match source {
        StateSource::Recorded { records, bases } => {
            let report = estimate_3bb(records, bases, opts)?;
            if report.flags.likelihood_tie || (retry.on_equal_pairs && report.flags.equal_pairs_detected) {
                return Err(Error::RetriesExhausted {
                    retries: 0,
                    report: Box::new(report),
                });
            }
            return Ok(report);
        }
        StateSource::Simulated { state, shots, bases } => (state, shots, bases),
    };

    let first = estimate_once(state, shots, bases, seed, 0, opts)?;
    let triggered = first.flags.likelihood_tie || (retry.on_equal_pairs && first.flags.equal_pairs_detected);
    if !triggered {
        return Ok(first);
    }

    let mut last = first;
    for r in 1..=retry.max_retries {
        let fresh = random_three_bases(state.dim(), derive_seed(seed, &[stream::RETRY, r as u64]))?;
        let mut report = estimate_once(state, shots, &fresh, seed, r as u64, opts)?;
        report.retries = r;
        if !report.flags.likelihood_tie {
            return Ok(report);
        }
        last = report;
    }
    last.retries = retry.max_retries;
    Err(Error::RetriesExhausted {
        retries: retry.max_retries,
        report: Box::new(last),
    })
}
