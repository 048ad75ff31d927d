//! Neighbour correlators `Lambda_k = 2 c_k c*_{k+1}` from measured
//! frequencies.

use alloc::vec::Vec;

#[allow(unused_imports)] // the methods are inherent when std is linked
use num_traits::Float;

use crate::basis::PairBasisParams;
use crate::error::{Error, Result};

/// Radicands below `-CLAMP_REPORT` are reported as clamped.
pub const CLAMP_REPORT: f64 = 1e-9;

/// `Re(Lambda_k)` for the pairs of one modified pair basis.
///
/// `pplus_freqs[nu]` is the frequency of the pair-plus outcome
/// `a|k> + b|k+1>` with `k = 2 nu + shift`; the result is indexed by `nu`:
/// `Re(Lambda_k) = (p_+ - a^2 q_k - b^2 q_{k+1}) / (a b)`.
pub fn lambda_real(
    canonical_freqs: &[f64],
    pplus_freqs: &[f64],
    params: &PairBasisParams,
    shift: usize,
) -> Result<Vec<f64>> {
    let (a, b) = (params.a(), params.b());
    if a * b < 1e-6 {
        return Err(Error::InvalidParams("a*b too small to extract correlators"));
    }
    if shift > 1 {
        return Err(Error::InvalidParams("shift must be 0 or 1"));
    }
    let d = canonical_freqs.len();
    if pplus_freqs.len() != d / 2 {
        return Err(Error::DimensionMismatch {
            expected: d / 2,
            found: pplus_freqs.len(),
        });
    }
    Ok(pplus_freqs
        .iter()
        .enumerate()
        .map(|(nu, &p)| {
            let k = 2 * nu + shift;
            let (qk, qk1) = (canonical_freqs[k % d], canonical_freqs[(k + 1) % d]);
            (p - a * a * qk - b * b * qk1) / (a * b)
        })
        .collect())
}

/// `|Im(Lambda_k)| = sqrt(4 q_k q_{k+1} - Re^2)`; the second value is true
/// when a negative radicand had to be clamped.
pub fn lambda_imag_magnitude(re_k: f64, q_k: f64, q_k1: f64) -> (f64, bool) {
    let radicand = 4.0 * q_k * q_k1 - re_k * re_k;
    (radicand.max(0.0).sqrt(), radicand < -CLAMP_REPORT)
}

/// Real parts and imaginary magnitudes of the correlator chain.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaChain {
    /// `Re(Lambda_k)`, `k = 0..d-1`.
    pub re: Vec<f64>,
    /// `|Im(Lambda_k)|`, `k = 0..d-1`.
    pub im_mag: Vec<f64>,
    /// `Re(Lambda_{d-1})` of the wrap-around pair `(d-1, 0)`.
    pub wrap_re: Option<f64>,
    pub wrap_im_mag: Option<f64>,
    /// Indices whose radicand was clamped (`d - 1` denotes the wrap pair).
    pub clamped: Vec<usize>,
}

impl LambdaChain {
    pub fn dim(&self) -> usize {
        self.re.len() + 1
    }

    /// Interleaves the even pairs (shift 0) and odd pairs (shift 1).
    pub fn from_frequencies(
        canonical_freqs: &[f64],
        pplus_even: &[f64],
        pplus_odd: &[f64],
        params: &PairBasisParams,
    ) -> Result<Self> {
        let d = canonical_freqs.len();
        let even = lambda_real(canonical_freqs, pplus_even, params, 0)?;
        let odd = lambda_real(canonical_freqs, pplus_odd, params, 1)?;
        let mut all_re = Vec::with_capacity(d);
        for k in 0..d {
            all_re.push(if k % 2 == 0 { even[k / 2] } else { odd[k / 2] });
        }
        let mut clamped = Vec::new();
        let mut all_im = Vec::with_capacity(d);
        for (k, &re) in all_re.iter().enumerate() {
            let (im, was_clamped) = lambda_imag_magnitude(re, canonical_freqs[k], canonical_freqs[(k + 1) % d]);
            if was_clamped {
                clamped.push(k);
            }
            all_im.push(im);
        }
        let wrap_re = all_re.pop();
        let wrap_im_mag = all_im.pop();
        Ok(Self {
            re: all_re,
            im_mag: all_im,
            wrap_re,
            wrap_im_mag,
            clamped,
        })
    }
}
