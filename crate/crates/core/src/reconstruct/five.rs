//! Five-basis baseline: the tilde bases measure the imaginary parts
//! directly, so the correlator chain is solved without enumeration.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::candidates::{chain_amplitudes, SignVector};
use super::{check_lengths, find_probs, find_record, EstimationReport, EstimatorOptions, Method, ReportFlags};
use crate::basis::PairBasisParams;
use crate::error::{Error, Result};
use crate::measure::{to_frequencies, BasisId, CountRecord, ProbabilityVector};
use crate::state::{classify_support, detect_equal_pairs, make_state, PureState};

/// Frequencies of `B0` and `B1..B4`, each in the vector order produced by
/// [`crate::basis::five_bases`] (plus vectors first, then minus vectors).
#[derive(Debug, Clone, PartialEq)]
pub struct FiveBasisObservations {
    pub canonical: Vec<f64>,
    pub pairs: [Vec<f64>; 4],
    pub shots: Option<u64>,
}

impl FiveBasisObservations {
    pub fn from_counts(records: &[CountRecord]) -> Result<Self> {
        let b0 = find_record(records, BasisId::B0)?;
        let get = |id| find_record(records, id).map(|r| to_frequencies(r).entries);
        let obs = Self {
            canonical: to_frequencies(b0).entries,
            pairs: [get(BasisId::B1)?, get(BasisId::B2)?, get(BasisId::B3)?, get(BasisId::B4)?],
            shots: Some(b0.shots()),
        };
        check_lengths(obs.canonical.len(), obs.pairs.iter().map(Vec::as_slice))?;
        Ok(obs)
    }

    pub fn from_probs(probs: &[ProbabilityVector]) -> Result<Self> {
        let get = |id| find_probs(probs, id).map(|p| p.entries.clone());
        let obs = Self {
            canonical: get(BasisId::B0)?,
            pairs: [get(BasisId::B1)?, get(BasisId::B2)?, get(BasisId::B3)?, get(BasisId::B4)?],
            shots: None,
        };
        check_lengths(obs.canonical.len(), obs.pairs.iter().map(Vec::as_slice))?;
        Ok(obs)
    }

    /// `Lambda_k` for `k = 0..d`:
    /// `Re = [(p+ - p-) - (a^2 - b^2)(q_k - q_{k+1})] / (2ab)` and
    /// `Im = -[(p~+ - p~-) - (a^2 - b^2)(q_k - q_{k+1})] / (2ab)`.
    pub fn correlators(&self, params: &PairBasisParams) -> Result<Vec<Complex64>> {
        let (a, b) = (params.a(), params.b());
        if a * b < 1e-6 {
            return Err(Error::InvalidParams("a*b too small to extract correlators"));
        }
        let d = self.canonical.len();
        let h = d / 2;
        let q = &self.canonical;
        Ok((0..d)
            .map(|k| {
                let (real_basis, imag_basis) = if k % 2 == 0 {
                    (&self.pairs[0], &self.pairs[1])
                } else {
                    (&self.pairs[2], &self.pairs[3])
                };
                let nu = k / 2;
                let skew = (a * a - b * b) * (q[k] - q[(k + 1) % d]);
                let re = (real_basis[nu] - real_basis[h + nu] - skew) / (2.0 * a * b);
                let im = -(imag_basis[nu] - imag_basis[h + nu] - skew) / (2.0 * a * b);
                Complex64::new(re, im)
            })
            .collect())
    }
}

/// Five-basis estimate from records for `B0..B4`.
pub fn estimate_5bb(
    records: &[CountRecord],
    params: &PairBasisParams,
    opts: &EstimatorOptions,
) -> Result<PureState> {
    Ok(estimate_5bb_report(&FiveBasisObservations::from_counts(records)?, params, opts)?.estimate)
}

/// Five-basis estimate with the implied sign vector, for comparison with the
/// three-basis method.
pub fn estimate_5bb_report(
    obs: &FiveBasisObservations,
    params: &PairBasisParams,
    opts: &EstimatorOptions,
) -> Result<EstimationReport> {
    let d = obs.canonical.len();
    let zero_eps = opts.zero_eps_for(obs.shots);
    let pattern = classify_support(&obs.canonical, zero_eps);
    if pattern.is_ambiguous() {
        return Err(Error::AmbiguousSupport {
            arcs: pattern.arcs.len(),
        });
    }
    let arc = pattern.arcs.first().ok_or(Error::ZeroVector)?;
    let lambdas = obs.correlators(params)?;
    let amps = chain_amplitudes(&obs.canonical, arc, |k| lambdas[k]);
    let estimate = make_state(&amps)?;
    let chosen_signs = SignVector(
        lambdas[..d - 1]
            .iter()
            .map(|l| if l.im >= 0.0 { 1 } else { -1 })
            .collect(),
    );
    Ok(EstimationReport {
        method: Method::FiveBases,
        estimate,
        chosen_signs,
        ranking: Vec::new(),
        flags: ReportFlags {
            equal_pairs_detected: detect_equal_pairs(&obs.canonical, opts.equal_eps_for(obs.shots)),
            ..ReportFlags::default()
        },
        params: params.clone(),
        basis_set: None,
        retries: 0,
    })
}
