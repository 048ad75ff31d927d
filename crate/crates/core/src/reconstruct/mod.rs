//! State reconstruction: the three-basis estimator with likelihood
//! selection, the five-basis baseline, and the re-randomizing retry loop.

mod candidates;
mod five;
mod lambda;
mod retry;

use alloc::vec::Vec;

pub use candidates::{
    enumerate_candidates, log_likelihood, Candidate, CompletionData, SignVector,
    MAX_ENUMERATION_DIM, PROB_FLOOR,
};
pub use five::{estimate_5bb, estimate_5bb_report, FiveBasisObservations};
pub use lambda::{lambda_imag_magnitude, lambda_real, LambdaChain, CLAMP_REPORT};
pub use retry::{estimate_3bb_with_retry, measure_three, RetryOptions, StateSource};

use crate::basis::{OrthonormalBasis, PairBasisParams, ThreeBasisSet, VectorRole};
use crate::error::{Error, Result};
use crate::measure::{to_frequencies, BasisId, CountRecord, ProbabilityVector};
use crate::state::{classify_support, detect_equal_pairs, infidelity, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ThreeBases,
    FiveBases,
}

impl Method {
    pub const fn name(self) -> &'static str {
        match self {
            Method::ThreeBases => "3bb",
            Method::FiveBases => "5bb",
        }
    }

    /// Number of bases measured, each with the full shot budget.
    pub const fn bases(self) -> u64 {
        match self {
            Method::ThreeBases => 3,
            Method::FiveBases => 5,
        }
    }
}

/// Thresholds of the estimator. `None` selects the data-dependent default.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorOptions {
    /// Canonical frequencies below this count as zero. Default: `1e-6` for
    /// exact probabilities, `1/(2N)` (no recorded outcome) for counts.
    pub zero_eps: Option<f64>,
    /// Tolerance for equal canonical frequencies. Default: `1e-6` for exact
    /// probabilities, `1/(2N)` (equal counts) for counts.
    pub equal_pair_eps: Option<f64>,
    /// Log-likelihood gap below which two distinct candidates tie.
    pub tie_tol: f64,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self {
            zero_eps: None,
            equal_pair_eps: None,
            tie_tol: 1e-9,
        }
    }
}

const EXACT_EPS: f64 = 1e-6;
const DISTINCT_STATES: f64 = 1e-9;

impl EstimatorOptions {
    fn zero_eps_for(&self, shots: Option<u64>) -> f64 {
        self.zero_eps.unwrap_or_else(|| default_eps(shots))
    }

    fn equal_eps_for(&self, shots: Option<u64>) -> f64 {
        self.equal_pair_eps.unwrap_or_else(|| default_eps(shots))
    }
}

fn default_eps(shots: Option<u64>) -> f64 {
    match shots {
        Some(n) => 0.5 / n as f64,
        None => EXACT_EPS,
    }
}

/// Frequencies in the canonical and both modified pair bases.
#[derive(Debug, Clone, PartialEq)]
pub struct Observations {
    pub canonical: Vec<f64>,
    pub b1p: Vec<f64>,
    pub b3p: Vec<f64>,
    /// Likelihood weights of the `b1p` and `b3p` outcomes: raw counts, or
    /// the probabilities themselves for exact data.
    pub weights_b1p: Vec<f64>,
    pub weights_b3p: Vec<f64>,
    /// Canonical-basis shots; `None` for exact probabilities.
    pub shots: Option<u64>,
}

pub(crate) fn find_record(records: &[CountRecord], id: BasisId) -> Result<&CountRecord> {
    records
        .iter()
        .find(|r| r.basis() == id)
        .ok_or(Error::MissingRecord(id))
}

pub(crate) fn find_probs(probs: &[ProbabilityVector], id: BasisId) -> Result<&ProbabilityVector> {
    probs
        .iter()
        .find(|p| p.basis == id)
        .ok_or(Error::MissingRecord(id))
}

pub(crate) fn check_lengths<'a>(d: usize, lens: impl IntoIterator<Item = &'a [f64]>) -> Result<()> {
    for v in lens {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
    }
    Ok(())
}

impl Observations {
    pub fn from_counts(records: &[CountRecord]) -> Result<Self> {
        let b0 = find_record(records, BasisId::B0)?;
        let b1 = find_record(records, BasisId::B1p)?;
        let b3 = find_record(records, BasisId::B3p)?;
        let weights = |r: &CountRecord| r.counts().iter().map(|&c| c as f64).collect::<Vec<_>>();
        let obs = Self {
            canonical: to_frequencies(b0).entries,
            b1p: to_frequencies(b1).entries,
            b3p: to_frequencies(b3).entries,
            weights_b1p: weights(b1),
            weights_b3p: weights(b3),
            shots: Some(b0.shots()),
        };
        obs.check()?;
        Ok(obs)
    }

    pub fn from_probs(probs: &[ProbabilityVector]) -> Result<Self> {
        let b0 = find_probs(probs, BasisId::B0)?;
        let b1 = find_probs(probs, BasisId::B1p)?;
        let b3 = find_probs(probs, BasisId::B3p)?;
        let obs = Self {
            canonical: b0.entries.clone(),
            b1p: b1.entries.clone(),
            b3p: b3.entries.clone(),
            weights_b1p: b1.entries.clone(),
            weights_b3p: b3.entries.clone(),
            shots: None,
        };
        obs.check()?;
        Ok(obs)
    }

    pub fn dim(&self) -> usize {
        self.canonical.len()
    }

    fn check(&self) -> Result<()> {
        check_lengths(
            self.dim(),
            [self.b1p.as_slice(), self.b3p.as_slice()],
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportFlags {
    pub ambiguous_support: bool,
    pub equal_pairs_detected: bool,
    pub likelihood_tie: bool,
    /// Correlators whose imaginary-part radicand was clamped.
    pub clamped_k: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedCandidate {
    pub signs: SignVector,
    pub loglik: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationReport {
    pub method: Method,
    pub estimate: PureState,
    pub chosen_signs: SignVector,
    /// All candidates by decreasing log-likelihood (empty for the five-basis
    /// method).
    pub ranking: Vec<RankedCandidate>,
    pub flags: ReportFlags,
    pub params: PairBasisParams,
    /// Bases used by the three-basis method.
    pub basis_set: Option<ThreeBasisSet>,
    /// Number of randomized basis re-draws performed.
    pub retries: u32,
}

fn outcome_slice(basis: &OrthonormalBasis, freqs: &[f64], role: VectorRole) -> Vec<f64> {
    basis.positions(role).into_iter().map(|j| freqs[j]).collect()
}

/// Outcomes that differ between candidates: the completion vectors of both
/// pair bases, plus the closing pair `(d-1, 0)` of `B3p`, whose correlator
/// is not part of the chain.
pub fn completion_data(bases: &ThreeBasisSet, obs: &Observations) -> CompletionData {
    let mut vectors = Vec::with_capacity(bases.dim() + 1);
    let mut weights = Vec::with_capacity(bases.dim() + 1);
    for (basis, w) in [(&bases.b1p, &obs.weights_b1p), (&bases.b3p, &obs.weights_b3p)] {
        for j in basis.positions(VectorRole::Completion) {
            vectors.push(basis.vectors[j].clone());
            weights.push(w[j]);
        }
    }
    if let Some(&j) = bases.b3p.positions(VectorRole::PairPlus).last() {
        vectors.push(bases.b3p.vectors[j].clone());
        weights.push(obs.weights_b3p[j]);
    }
    CompletionData { vectors, weights }
}

/// Three-basis estimate from count records for `B0`, `B1p` and `B3p`.
pub fn estimate_3bb(
    records: &[CountRecord],
    bases: &ThreeBasisSet,
    opts: &EstimatorOptions,
) -> Result<EstimationReport> {
    estimate_3bb_observed(&Observations::from_counts(records)?, bases, opts)
}

/// Three-basis estimate from exact probability vectors.
pub fn estimate_3bb_exact(
    probs: &[ProbabilityVector],
    bases: &ThreeBasisSet,
    opts: &EstimatorOptions,
) -> Result<EstimationReport> {
    estimate_3bb_observed(&Observations::from_probs(probs)?, bases, opts)
}

pub fn estimate_3bb_observed(
    obs: &Observations,
    bases: &ThreeBasisSet,
    opts: &EstimatorOptions,
) -> Result<EstimationReport> {
    let d = bases.dim();
    if obs.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: obs.dim(),
        });
    }
    let zero_eps = opts.zero_eps_for(obs.shots);
    let pattern = classify_support(&obs.canonical, zero_eps);
    if pattern.is_ambiguous() {
        return Err(Error::AmbiguousSupport {
            arcs: pattern.arcs.len(),
        });
    }
    let equal_pairs_detected = detect_equal_pairs(&obs.canonical, opts.equal_eps_for(obs.shots));

    let chain = LambdaChain::from_frequencies(
        &obs.canonical,
        &outcome_slice(&bases.b1p, &obs.b1p, VectorRole::PairPlus),
        &outcome_slice(&bases.b3p, &obs.b3p, VectorRole::PairPlus),
        &bases.params,
    )?;
    let completion = completion_data(bases, obs);
    let mut candidates = enumerate_candidates(&chain, &obs.canonical, zero_eps)?;
    for c in candidates.iter_mut() {
        c.loglik = log_likelihood(&c.state, &completion);
    }
    // Stable sort keeps the lexicographically smallest sign vector first
    // among equal likelihoods.
    candidates.sort_by(|x, y| y.loglik.total_cmp(&x.loglik));

    let best = &candidates[0];
    let likelihood_tie = candidates[1..]
        .iter()
        .take_while(|c| best.loglik - c.loglik < opts.tie_tol)
        .any(|c| infidelity(&c.state, &best.state).is_ok_and(|x| x > DISTINCT_STATES));

    Ok(EstimationReport {
        method: Method::ThreeBases,
        estimate: best.state.clone(),
        chosen_signs: best.signs.clone(),
        ranking: candidates
            .iter()
            .map(|c| RankedCandidate {
                signs: c.signs.clone(),
                loglik: c.loglik,
            })
            .collect(),
        flags: ReportFlags {
            ambiguous_support: false,
            equal_pairs_detected,
            likelihood_tie,
            clamped_k: chain.clamped,
        },
        params: bases.params.clone(),
        basis_set: Some(bases.clone()),
        retries: 0,
    })
}
