//! Pure states, random states, infidelity and support analysis of canonical
//! probabilities.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // the methods are inherent when std is linked
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dimension, Error, Result};
use crate::seed::rng_from_seed;

/// Amplitudes with modulus at or below this are never used as gauge anchor.
pub const ZERO_AMPLITUDE: f64 = 1e-12;

/// A normalized state vector whose first non-negligible amplitude is real
/// and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Index of the gauge anchor.
    pub fn anchor(&self) -> usize {
        self.amplitudes
            .iter()
            .position(|c| c.norm() > ZERO_AMPLITUDE)
            .unwrap_or(0)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn conj(&self) -> PureState {
        let conj: Vec<Complex64> = self.amplitudes.iter().map(|c| c.conj()).collect();
        make_state(&conj).expect("conjugate of a valid state is valid")
    }

    /// Neighbour correlators `2 c_k c*_{k+1}` for `k = 0..d`, indices mod d.
    pub fn pair_correlators(&self) -> Vec<Complex64> {
        let d = self.dim();
        (0..d)
            .map(|k| 2.0 * self.amplitudes[k] * self.amplitudes[(k + 1) % d].conj())
            .collect()
    }
}

/// `<u|v>` for raw amplitude slices of equal length.
pub(crate) fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn make_state(amplitudes: &[Complex64]) -> Result<PureState> {
    if amplitudes.len() < 2 {
        return Err(Error::UnsupportedDimension(amplitudes.len()));
    }
    if amplitudes.iter().all(|c| c.norm() < ZERO_AMPLITUDE) {
        return Err(Error::ZeroVector);
    }
    let norm_sqr: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
    let mut amps: Vec<Complex64> = if (norm_sqr - 1.0).abs() <= 4.0 * f64::EPSILON {
        amplitudes.to_vec()
    } else {
        let norm = norm_sqr.sqrt();
        amplitudes.iter().map(|c| c / norm).collect()
    };

    let anchor = amps
        .iter()
        .position(|c| c.norm() > ZERO_AMPLITUDE)
        .ok_or(Error::ZeroVector)?;
    let a = amps[anchor];
    if a.im != 0.0 || a.re < 0.0 {
        let modulus = a.norm();
        let rotation = a.conj() / modulus;
        for c in amps.iter_mut() {
            *c *= rotation;
        }
        amps[anchor] = Complex64::new(modulus, 0.0);
    }
    Ok(PureState { amplitudes: amps })
}

/// Haar-random state of dimension `d` from a seed.
pub fn haar_random(d: usize, seed: u64) -> Result<PureState> {
    let mut rng = rng_from_seed(seed);
    haar_random_with(d, &mut rng)
}

/// Haar-random state drawn from normalized complex Gaussian vectors.
pub fn haar_random_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<PureState> {
    check_dimension(d)?;
    loop {
        let v: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        match make_state(&v) {
            Ok(s) => return Ok(s),
            Err(Error::ZeroVector) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// `1 - |<phi|psi>|^2`, clamped to `[0, 1]`.
pub fn infidelity(psi: &PureState, phi: &PureState) -> Result<f64> {
    let overlap = phi.inner(psi)?.norm_sqr();
    Ok((1.0 - overlap).clamp(0.0, 1.0))
}

/// Zero indices of a canonical probability vector and the maximal cyclic
/// runs of non-zero indices between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroPattern {
    pub dim: usize,
    pub zero_indices: Vec<usize>,
    /// Each arc lists its indices in cyclic order; arcs are sorted by their
    /// first index.
    pub arcs: Vec<Vec<usize>>,
}

impl ZeroPattern {
    pub fn is_ambiguous(&self) -> bool {
        self.arcs.len() >= 2
    }

    pub fn is_zero(&self, k: usize) -> bool {
        self.zero_indices.binary_search(&k).is_ok()
    }
}

pub fn classify_support(canonical_freqs: &[f64], eps: f64) -> ZeroPattern {
    let d = canonical_freqs.len();
    let zero: Vec<bool> = canonical_freqs.iter().map(|&f| f < eps).collect();
    let zero_indices: Vec<usize> = (0..d).filter(|&k| zero[k]).collect();

    let arcs = match zero_indices.first() {
        None if d > 0 => alloc::vec![(0..d).collect()],
        None => Vec::new(),
        Some(&first_zero) => {
            let mut arcs: Vec<Vec<usize>> = Vec::new();
            let mut current: Vec<usize> = Vec::new();
            for step in 1..=d {
                let k = (first_zero + step) % d;
                if zero[k] {
                    if !current.is_empty() {
                        arcs.push(core::mem::take(&mut current));
                    }
                } else {
                    current.push(k);
                }
            }
            if !current.is_empty() {
                arcs.push(current);
            }
            arcs.sort_by_key(|arc| arc[0]);
            arcs
        }
    };

    ZeroPattern {
        dim: d,
        zero_indices,
        arcs,
    }
}

/// True iff two disjoint index pairs have frequencies equal within `eps`.
pub fn detect_equal_pairs(canonical_freqs: &[f64], eps: f64) -> bool {
    let d = canonical_freqs.len();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            if (canonical_freqs[i] - canonical_freqs[j]).abs() < eps {
                pairs.push((i, j));
            }
        }
    }
    for (n, &(i, j)) in pairs.iter().enumerate() {
        for &(k, l) in &pairs[n + 1..] {
            if i != k && i != l && j != k && j != l {
                return true;
            }
        }
    }
    false
}
