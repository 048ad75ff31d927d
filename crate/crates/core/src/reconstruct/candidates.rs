//! Sign enumeration, phase chaining and likelihood scoring.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // the methods are inherent when std is linked
use num_traits::Float;

use super::lambda::LambdaChain;
use crate::error::{Error, Result};
use crate::state::{classify_support, inner, make_state, PureState};

pub const MAX_ENUMERATION_DIM: usize = 24;
pub const PROB_FLOOR: f64 = 1e-12;

/// One `±1` per correlator `Lambda_0..Lambda_{d-2}`; `+1` picks
/// `Re + i|Im|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    /// Sign vector number `index` in lexicographic order (`-1 < +1`).
    pub fn from_index(index: u64, len: usize) -> Self {
        SignVector(
            (0..len)
                .map(|k| if index >> (len - 1 - k) & 1 == 1 { 1 } else { -1 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn flipped(&self) -> Self {
        SignVector(self.0.iter().map(|s| -s).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub state: PureState,
    pub signs: SignVector,
    /// Natural-log likelihood; zero until scored.
    pub loglik: f64,
}

/// Builds amplitudes `sqrt(q_k) e^{i theta_k}` along one arc with
/// `theta_{k+1} = theta_k - arg(Lambda_k)`. `link(k)` returns `Lambda_k`
/// for the link from `k` to `k + 1 (mod d)`.
pub(crate) fn chain_amplitudes(
    canonical_freqs: &[f64],
    arc: &[usize],
    mut link: impl FnMut(usize) -> Complex64,
) -> Vec<Complex64> {
    let d = canonical_freqs.len();
    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); d];
    let mut theta = 0.0f64;
    for (t, &k) in arc.iter().enumerate() {
        if t > 0 {
            let prev = arc[t - 1];
            let lambda = link(prev);
            theta -= lambda.im.atan2(lambda.re);
        }
        amps[k] = Complex64::from_polar(canonical_freqs[k].max(0.0).sqrt(), theta);
    }
    amps
}

/// The `2^{d-1}` candidate states of a correlator chain, in sign-vector
/// order. Moduli come from the canonical frequencies; indices with
/// frequency below `zero_eps` get zero amplitude.
///
/// If the support arc wraps through `d-1 -> 0`, the wrap link borrows the
/// sign slot of the link just before the arc, which carries no information.
pub fn enumerate_candidates(
    chain: &LambdaChain,
    canonical_freqs: &[f64],
    zero_eps: f64,
) -> Result<Vec<Candidate>> {
    let d = chain.dim();
    if canonical_freqs.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: canonical_freqs.len(),
        });
    }
    if d > MAX_ENUMERATION_DIM {
        return Err(Error::EnumerationTooLarge(d));
    }
    let pattern = classify_support(canonical_freqs, zero_eps);
    if pattern.is_ambiguous() {
        return Err(Error::AmbiguousSupport {
            arcs: pattern.arcs.len(),
        });
    }
    let arc = pattern.arcs.first().ok_or(Error::ZeroVector)?;
    let wrap_slot = (arc[0] + d - 1) % d;

    let slots = d - 1;
    let count = 1u64 << slots;
    let mut out = Vec::with_capacity(count as usize);
    for index in 0..count {
        let signs = SignVector::from_index(index, slots);
        let amps = chain_amplitudes(canonical_freqs, arc, |k| {
            if k == d - 1 {
                let s = signs.0[wrap_slot] as f64;
                Complex64::new(
                    chain.wrap_re.unwrap_or(0.0),
                    s * chain.wrap_im_mag.unwrap_or(0.0),
                )
            } else {
                Complex64::new(chain.re[k], signs.0[k] as f64 * chain.im_mag[k])
            }
        });
        out.push(Candidate {
            state: make_state(&amps)?,
            signs,
            loglik: 0.0,
        });
    }
    Ok(out)
}

/// Completion vectors of both modified pair bases with their observed
/// weights (counts, or probabilities for exact data).
#[derive(Debug, Clone, PartialEq)]
pub struct CompletionData {
    pub vectors: Vec<Vec<Complex64>>,
    pub weights: Vec<f64>,
}

/// `sum_j f_j ln(max(|<phi_j|psi>|^2, floor))`.
pub fn log_likelihood(candidate: &PureState, completion: &CompletionData) -> f64 {
    completion
        .vectors
        .iter()
        .zip(&completion.weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(v, &w)| {
            let p = inner(v, candidate.amplitudes()).norm_sqr();
            w * p.max(PROB_FLOOR).ln()
        })
        .sum()
}
