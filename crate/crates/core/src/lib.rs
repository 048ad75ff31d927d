//! Pure-state estimation from three measurement bases.
//!
//! The canonical basis fixes the moduli of the amplitudes, the pair-plus
//! projectors of two pair bases fix the real part of every neighbour
//! correlator `2 c_k c*_{k+1}`, and the imaginary part is known up to a sign.
//! All `2^{d-1}` sign assignments are turned into candidate states and the
//! remaining `d` completion projectors pick the most likely one.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the CLI and
//! parallel sweeps live in `tribasis-cli`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod basis;
pub mod error;
pub mod measure;
pub mod metrics;
pub mod reconstruct;
pub mod seed;
pub mod state;

pub use basis::{
    adapt_to_support, canonical, check_orthonormal, five_bases, fourier_completion, gram_schmidt,
    random_three_bases, three_bases, three_bases_with_completion, AdaptedBases, OrthonormalBasis, PairBasisParams,
    ThreeBasisSet, VectorRole,
};
pub use error::{Error, Result};
pub use measure::{exact_probs, sample_counts, to_frequencies, BasisId, CountRecord, ProbabilityVector};
pub use metrics::{
    aggregate_stats, omega_f_flag, run_sweep, trial_average_infidelity, Method, RetryPolicy,
    Stats, SweepConfig, SweepRow,
};
pub use reconstruct::{
    enumerate_candidates, estimate_3bb, estimate_3bb_exact, estimate_3bb_with_retry, estimate_5bb,
    estimate_5bb_report, lambda_imag_magnitude, lambda_real, log_likelihood, measure_three, Candidate,
    CompletionData, EstimationReport, EstimatorOptions, FiveBasisObservations, LambdaChain,
    Observations, RankedCandidate, ReportFlags, RetryOptions, SignVector, StateSource,
};
pub use seed::{derive_seed, rng_from_seed, SimRng};
pub use state::{
    classify_support, detect_equal_pairs, haar_random, infidelity, make_state, PureState,
    ZeroPattern,
};

pub use num_complex::Complex64;
