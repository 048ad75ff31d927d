//! Exact transition probabilities and finite-shot projective measurements.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::basis::OrthonormalBasis;
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;
use crate::state::{inner, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisId {
    /// Canonical basis.
    B0,
    /// Modified even-pair basis.
    B1p,
    /// Modified odd-pair basis.
    B3p,
    B1,
    B2,
    B3,
    B4,
}

impl BasisId {
    pub const fn name(self) -> &'static str {
        match self {
            BasisId::B0 => "B0",
            BasisId::B1p => "B1p",
            BasisId::B3p => "B3p",
            BasisId::B1 => "B1",
            BasisId::B2 => "B2",
            BasisId::B3 => "B3",
            BasisId::B4 => "B4",
        }
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "B0" => BasisId::B0,
            "B1p" => BasisId::B1p,
            "B3p" => BasisId::B3p,
            "B1" => BasisId::B1,
            "B2" => BasisId::B2,
            "B3" => BasisId::B3,
            "B4" => BasisId::B4,
            _ => return Err(Error::InvalidCounts("unknown basis name")),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    pub basis: BasisId,
    pub entries: Vec<f64>,
}

/// Outcome counts of `shots` projective measurements in one basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRecord {
    basis: BasisId,
    counts: Vec<u64>,
    shots: u64,
}

impl CountRecord {
    pub fn new(basis: BasisId, counts: Vec<u64>) -> Result<Self> {
        let shots: u64 = counts.iter().sum();
        if shots == 0 {
            return Err(Error::InvalidCounts("a record needs at least one shot"));
        }
        Ok(Self {
            basis,
            counts,
            shots,
        })
    }

    /// Like [`CountRecord::new`] but checks a declared shot total.
    pub fn with_shots(basis: BasisId, counts: Vec<u64>, shots: u64) -> Result<Self> {
        let record = Self::new(basis, counts)?;
        if record.shots != shots {
            return Err(Error::InvalidCounts("shots must equal the sum of counts"));
        }
        Ok(record)
    }

    pub fn basis(&self) -> BasisId {
        self.basis
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }
}

pub fn exact_probs(state: &PureState, basis: &OrthonormalBasis) -> Result<ProbabilityVector> {
    if let Some(v) = basis.vectors.iter().find(|v| v.len() != state.dim()) {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            found: v.len(),
        });
    }
    Ok(ProbabilityVector {
        basis: basis.id,
        entries: basis
            .vectors
            .iter()
            .map(|v| inner(v, state.amplitudes()).norm_sqr())
            .collect(),
    })
}

pub fn sample_counts(probs: &ProbabilityVector, shots: u64, seed: u64) -> Result<CountRecord> {
    sample_counts_with(probs, shots, &mut rng_from_seed(seed))
}

/// Multinomial draw as a chain of conditional binomials. Negative entries
/// (rounding noise) are treated as zero and the vector is renormalized.
pub fn sample_counts_with<R: Rng + ?Sized>(
    probs: &ProbabilityVector,
    shots: u64,
    rng: &mut R,
) -> Result<CountRecord> {
    if shots == 0 {
        return Err(Error::InvalidCounts("shots must be at least 1"));
    }
    let weights: Vec<f64> = probs.entries.iter().map(|&p| p.max(0.0)).collect();
    let mut mass: f64 = weights.iter().sum();
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::InvalidCounts("probabilities must have positive finite mass"));
    }
    let mut remaining = shots;
    let mut counts = Vec::with_capacity(weights.len());
    let last = weights.len() - 1;
    for (j, &w) in weights.iter().enumerate() {
        if j == last || remaining == 0 {
            counts.push(if j == last { remaining } else { 0 });
            remaining -= *counts.last().unwrap();
            mass -= w;
            continue;
        }
        let p = if mass > 0.0 { (w / mass).clamp(0.0, 1.0) } else { 0.0 };
        let x = if p >= 1.0 {
            remaining
        } else if p <= 0.0 {
            0
        } else {
            Binomial::new(remaining, p)
                .expect("p in (0, 1)")
                .sample(rng)
        };
        counts.push(x);
        remaining -= x;
        mass -= w;
    }
    CountRecord::new(probs.basis, counts)
}

pub fn to_frequencies(counts: &CountRecord) -> ProbabilityVector {
    let n = counts.shots as f64;
    ProbabilityVector {
        basis: counts.basis,
        entries: counts.counts.iter().map(|&c| c as f64 / n).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{canonical, three_bases, PairBasisParams};
    use crate::state::{haar_random, make_state};
    use crate::Complex64;
    use alloc::vec;

    fn state(v: &[f64]) -> PureState {
        make_state(&v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn canonical_probabilities() {
        let p = exact_probs(&state(&[1.0, 0.0, 0.0, 0.0]), &canonical(4).unwrap()).unwrap();
        assert_eq!(p.entries, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(p.basis, BasisId::B0);
    }

    #[test]
    fn pair_plus_probability() {
        let set = three_bases(4, &PairBasisParams::balanced(4)).unwrap();
        let p = exact_probs(&state(&[1.0, 1.0, 0.0, 0.0]), &set.b1p).unwrap();
        assert!((p.entries[0] - 1.0).abs() < 1e-15);
        for &x in &p.entries[1..] {
            assert!(x.abs() < 1e-15);
        }
    }

    #[test]
    fn alternating_state_is_flat_in_canonical_basis() {
        let psi = state(&[1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0]);
        let p = exact_probs(&psi, &canonical(8).unwrap()).unwrap();
        for &x in &p.entries {
            assert!((x - 0.125).abs() < 1e-15);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let psi = state(&[1.0, 0.0]);
        assert!(matches!(
            exact_probs(&psi, &canonical(4).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn deterministic_outcome() {
        let probs = ProbabilityVector {
            basis: BasisId::B0,
            entries: vec![1.0, 0.0, 0.0, 0.0],
        };
        let r = sample_counts(&probs, 100, 3).unwrap();
        assert_eq!(r.counts(), &[100, 0, 0, 0]);
        assert_eq!(to_frequencies(&r).entries, vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn frequencies_of_flat_counts() {
        let r = CountRecord::new(BasisId::B0, vec![1, 1, 1, 1]).unwrap();
        assert_eq!(to_frequencies(&r).entries, vec![0.25; 4]);
    }

    #[test]
    fn large_binomial_within_three_sigma() {
        let probs = ProbabilityVector {
            basis: BasisId::B0,
            entries: vec![0.5, 0.5, 0.0, 0.0],
        };
        let r = sample_counts(&probs, 1_000_000, 17).unwrap();
        for &c in &r.counts()[..2] {
            assert!((c as i64 - 500_000).abs() <= 1500, "count {c}");
        }
        assert_eq!(&r.counts()[2..], &[0, 0]);
    }

    #[test]
    fn shots_are_conserved_and_deterministic() {
        let mut rng = rng_from_seed(8);
        for i in 0..1000 {
            let psi = haar_random(6, i).unwrap();
            let p = exact_probs(&psi, &canonical(6).unwrap()).unwrap();
            let shots = rng.random_range(1..5000u64);
            let r = sample_counts_with(&p, shots, &mut rng).unwrap();
            assert_eq!(r.counts().iter().sum::<u64>(), shots);
            assert_eq!(r.shots(), shots);
        }
        let p = exact_probs(&haar_random(6, 1).unwrap(), &canonical(6).unwrap()).unwrap();
        assert_eq!(sample_counts(&p, 1000, 5).unwrap(), sample_counts(&p, 1000, 5).unwrap());
    }

    #[test]
    fn many_shots_approach_probabilities() {
        let psi = haar_random(8, 4).unwrap();
        let set = three_bases(8, &PairBasisParams::balanced(8)).unwrap();
        for (i, basis) in set.bases().into_iter().enumerate() {
            let p = exact_probs(&psi, basis).unwrap();
            let f = to_frequencies(&sample_counts(&p, 10_000_000, 40 + i as u64).unwrap());
            for (x, y) in p.entries.iter().zip(&f.entries) {
                assert!((x - y).abs() < 2e-3);
            }
        }
    }

    #[test]
    fn averaged_counts_converge_within_five_sigma() {
        let psi = haar_random(4, 9).unwrap();
        let p = exact_probs(&psi, &canonical(4).unwrap()).unwrap();
        let (seeds, shots) = (10_000u64, 50u64);
        let mut sums = vec![0u64; 4];
        for s in 0..seeds {
            let r = sample_counts(&p, shots, s).unwrap();
            for (acc, c) in sums.iter_mut().zip(r.counts()) {
                *acc += c;
            }
        }
        let total = (seeds * shots) as f64;
        for (j, &sum) in sums.iter().enumerate() {
            let q = p.entries[j];
            let sigma = (q * (1.0 - q) / total).sqrt();
            assert!((sum as f64 / total - q).abs() < 5.0 * sigma + 1e-12);
        }
    }

    #[test]
    fn probabilities_are_phase_invariant_and_complete() {
        let psi = haar_random(6, 21).unwrap();
        let rotated = make_state(
            &psi.amplitudes()
                .iter()
                .map(|c| c * Complex64::from_polar(1.0, 0.7))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let set = three_bases(6, &PairBasisParams::balanced(6)).unwrap();
        for basis in set.bases() {
            let p = exact_probs(&psi, basis).unwrap();
            let q = exact_probs(&rotated, basis).unwrap();
            assert!((p.entries.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            for (x, y) in p.entries.iter().zip(&q.entries) {
                assert!((x - y).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn record_validation() {
        assert!(CountRecord::new(BasisId::B0, vec![0, 0]).is_err());
        assert!(CountRecord::with_shots(BasisId::B0, vec![1, 2], 4).is_err());
        assert!(CountRecord::with_shots(BasisId::B0, vec![1, 2], 3).is_ok());
        assert_eq!("B3p".parse::<BasisId>().unwrap(), BasisId::B3p);
        assert!("B9".parse::<BasisId>().is_err());
    }
}
