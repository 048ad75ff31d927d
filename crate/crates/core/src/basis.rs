//! Measurement bases: canonical, the four pair bases of the five-basis
//! method, the two modified pair bases with Fourier completion states,
//! randomized replacements and bases adapted to a support arc.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)] // the methods are inherent when std is linked
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dimension, Error, Result};
use crate::measure::BasisId;
use crate::seed::rng_from_seed;
use crate::state::{inner, make_state, PureState};

const NORM_TOL: f64 = 1e-12;
const GS_TOL: f64 = 1e-10;
const RANDOM_GS_TOL: f64 = 1e-8;
const RANDOM_DRAWS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorRole {
    Canonical,
    PairPlus,
    PairMinus,
    Completion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    pub id: BasisId,
    pub vectors: Vec<Vec<Complex64>>,
    pub roles: Vec<VectorRole>,
}

impl OrthonormalBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Positions of the vectors carrying `role`, in basis order.
    pub fn positions(&self, role: VectorRole) -> Vec<usize> {
        (0..self.roles.len()).filter(|&j| self.roles[j] == role).collect()
    }

    pub fn vectors_with(&self, role: VectorRole) -> Vec<&[Complex64]> {
        self.positions(role)
            .into_iter()
            .map(|j| self.vectors[j].as_slice())
            .collect()
    }
}

/// Amplitudes `a`, `b` of the pair vectors and the completion phases.
#[derive(Debug, Clone, PartialEq)]
pub struct PairBasisParams {
    a: f64,
    b: f64,
    phases: Vec<f64>,
}

impl PairBasisParams {
    pub fn new(a: f64, b: f64, phases: Vec<f64>) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidParams("a and b must be positive"));
        }
        if (a * a + b * b - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParams("a^2 + b^2 must equal 1"));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParams("phases must be finite"));
        }
        Ok(Self { a, b, phases })
    }

    /// `a = b = 1/sqrt(2)` with [`default_phases`].
    pub fn balanced(d: usize) -> Self {
        Self {
            a: FRAC_1_SQRT_2,
            b: FRAC_1_SQRT_2,
            phases: default_phases(d),
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    fn check_for(&self, d: usize) -> Result<()> {
        if self.phases.len() != d / 2 {
            return Err(Error::InvalidParams("need exactly d/2 completion phases"));
        }
        Ok(())
    }
}

/// Quadratic chirp `phi_n = pi n (n + 1) / d`, `n = 0..d/2`.
pub fn default_phases(d: usize) -> Vec<f64> {
    (0..d / 2)
        .map(|n| PI * (n * (n + 1)) as f64 / d as f64)
        .collect()
}

/// Canonical basis together with the two modified pair bases.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeBasisSet {
    pub canonical: OrthonormalBasis,
    pub b1p: OrthonormalBasis,
    pub b3p: OrthonormalBasis,
    pub params: PairBasisParams,
    pub randomized: bool,
}

impl ThreeBasisSet {
    pub fn dim(&self) -> usize {
        self.canonical.dim()
    }

    pub fn bases(&self) -> [&OrthonormalBasis; 3] {
        [&self.canonical, &self.b1p, &self.b3p]
    }
}

fn unit(d: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    v[k] = Complex64::new(1.0, 0.0);
    v
}

fn pair_vector(d: usize, k: usize, first: Complex64, second: Complex64) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    v[k % d] = first;
    v[(k + 1) % d] = second;
    v
}

pub fn canonical(d: usize) -> Result<OrthonormalBasis> {
    check_dimension(d)?;
    Ok(OrthonormalBasis {
        id: BasisId::B0,
        vectors: (0..d).map(|k| unit(d, k)).collect(),
        roles: vec![VectorRole::Canonical; d],
    })
}

/// The four pair bases `B1..B4` of the five-basis method.
///
/// Pair `nu` of `B1`/`B2` couples `2nu, 2nu+1`, of `B3`/`B4` couples
/// `2nu+1, 2nu+2 (mod d)`. The plus vector is `a|k> + b|k+1>` (`+ i b` for
/// `B2`/`B4`) and the minus vector is its orthogonal partner
/// `b|k> - a|k+1>` (`- i a`); at `a = b` this is the usual `±` pair.
/// Vectors are ordered all plus vectors first, then all minus vectors.
pub fn five_bases(d: usize, params: &PairBasisParams) -> Result<[OrthonormalBasis; 4]> {
    check_dimension(d)?;
    let (a, b) = (params.a, params.b);
    let h = d / 2;
    let build = |id: BasisId, shift: usize, twist: Complex64| {
        let mut vectors = Vec::with_capacity(d);
        let mut roles = Vec::with_capacity(d);
        for nu in 0..h {
            let k = 2 * nu + shift;
            vectors.push(pair_vector(d, k, Complex64::new(a, 0.0), twist * b));
            roles.push(VectorRole::PairPlus);
        }
        for nu in 0..h {
            let k = 2 * nu + shift;
            vectors.push(pair_vector(d, k, Complex64::new(b, 0.0), -twist * a));
            roles.push(VectorRole::PairMinus);
        }
        OrthonormalBasis { id, vectors, roles }
    };
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    Ok([
        build(BasisId::B1, 0, one),
        build(BasisId::B2, 0, i),
        build(BasisId::B3, 1, one),
        build(BasisId::B4, 1, i),
    ])
}

/// Completion vectors orthogonal to the pair-plus vectors `a|k> + b|k+1>`:
/// `|phi_j> = sum_n F_jn (b|2n+shift> - a|2n+1+shift>)` with
/// `F_jn = (d/2)^{-1/2} exp(i[2 pi j n / (d/2) + phi_n])`.
pub(crate) fn completion_vectors(
    d: usize,
    shift: usize,
    a: f64,
    b: f64,
    phases: &[f64],
) -> Vec<Vec<Complex64>> {
    let h = d / 2;
    let scale = 1.0 / (h as f64).sqrt();
    (0..h)
        .map(|j| {
            let mut v = vec![Complex64::new(0.0, 0.0); d];
            for (n, phase) in phases.iter().enumerate() {
                let angle = 2.0 * PI * ((j * n) % h) as f64 / h as f64 + phase;
                let f = Complex64::from_polar(scale, angle);
                v[(2 * n + shift) % d] += f * b;
                v[(2 * n + 1 + shift) % d] -= f * a;
            }
            v
        })
        .collect()
}

/// Fourier completion states of the balanced pair bases.
pub fn fourier_completion(d: usize, shift: usize, phases: &[f64]) -> Result<Vec<Vec<Complex64>>> {
    check_dimension(d)?;
    if shift > 1 {
        return Err(Error::InvalidParams("shift must be 0 or 1"));
    }
    if phases.len() != d / 2 {
        return Err(Error::InvalidParams("need exactly d/2 completion phases"));
    }
    Ok(completion_vectors(d, shift, FRAC_1_SQRT_2, FRAC_1_SQRT_2, phases))
}

fn pair_plus_vectors(d: usize, shift: usize, a: f64, b: f64) -> Vec<Vec<Complex64>> {
    (0..d / 2)
        .map(|nu| pair_vector(d, 2 * nu + shift, Complex64::new(a, 0.0), Complex64::new(b, 0.0)))
        .collect()
}

fn assemble(
    id: BasisId,
    pair_plus: Vec<Vec<Complex64>>,
    completion: Vec<Vec<Complex64>>,
) -> OrthonormalBasis {
    let mut roles = vec![VectorRole::PairPlus; pair_plus.len()];
    roles.extend(core::iter::repeat_n(VectorRole::Completion, completion.len()));
    let mut vectors = pair_plus;
    vectors.extend(completion);
    OrthonormalBasis { id, vectors, roles }
}

pub fn three_bases(d: usize, params: &PairBasisParams) -> Result<ThreeBasisSet> {
    check_dimension(d)?;
    params.check_for(d)?;
    let (a, b) = (params.a, params.b);
    let b1p = assemble(
        BasisId::B1p,
        pair_plus_vectors(d, 0, a, b),
        completion_vectors(d, 0, a, b, &params.phases),
    );
    let b3p = assemble(
        BasisId::B3p,
        pair_plus_vectors(d, 1, a, b),
        completion_vectors(d, 1, a, b, &params.phases),
    );
    Ok(ThreeBasisSet {
        canonical: canonical(d)?,
        b1p,
        b3p,
        params: params.clone(),
        randomized: false,
    })
}

/// Random `a`, `b` and random completion vectors, orthogonalized against the
/// pair-plus vectors.
pub fn random_three_bases(d: usize, seed: u64) -> Result<ThreeBasisSet> {
    check_dimension(d)?;
    let mut rng = rng_from_seed(seed);
    let lo = 0.95f64.acos();
    let hi = 0.3f64.acos();
    let angle = rng.random_range(lo..=hi);
    let (a, b) = (angle.cos(), angle.sin());
    let params = PairBasisParams::new(a, b, default_phases(d))?;

    let mut build = |id: BasisId, shift: usize| -> Result<OrthonormalBasis> {
        let pair_plus = pair_plus_vectors(d, shift, a, b);
        for _ in 0..RANDOM_DRAWS {
            let draws: Vec<Vec<Complex64>> = (0..d / 2)
                .map(|_| {
                    (0..d)
                        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                        .collect()
                })
                .collect();
            if let Ok(completion) = orthonormalize_against(&pair_plus, draws, RANDOM_GS_TOL) {
                return Ok(assemble(id, pair_plus, completion));
            }
        }
        Err(Error::DegenerateDraw {
            attempts: RANDOM_DRAWS,
        })
    };
    let b1p = build(BasisId::B1p, 0)?;
    let b3p = build(BasisId::B3p, 1)?;
    Ok(ThreeBasisSet {
        canonical: canonical(d)?,
        b1p,
        b3p,
        params,
        randomized: true,
    })
}

/// Bases with the pair vectors of `params` and the given completion
/// vectors, as recorded alongside data taken in randomized bases.
pub fn three_bases_with_completion(
    params: &PairBasisParams,
    b1p_completion: Vec<Vec<Complex64>>,
    b3p_completion: Vec<Vec<Complex64>>,
) -> Result<ThreeBasisSet> {
    let d = 2 * params.phases.len();
    check_dimension(d)?;
    let build = |id: BasisId, shift: usize, completion: Vec<Vec<Complex64>>| -> Result<OrthonormalBasis> {
        if completion.len() != d / 2 {
            return Err(Error::DimensionMismatch {
                expected: d / 2,
                found: completion.len(),
            });
        }
        if let Some(v) = completion.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
        let basis = assemble(id, pair_plus_vectors(d, shift, params.a, params.b), completion);
        if !check_orthonormal(&basis, 1e-9) {
            return Err(Error::InvalidParams("completion vectors do not complete an orthonormal basis"));
        }
        Ok(basis)
    };
    let b1p = build(BasisId::B1p, 0, b1p_completion)?;
    let b3p = build(BasisId::B3p, 1, b3p_completion)?;
    Ok(ThreeBasisSet {
        canonical: canonical(d)?,
        b1p,
        b3p,
        params: params.clone(),
        randomized: true,
    })
}

/// Projects each candidate off `fixed` (assumed orthonormal) and the
/// previously accepted candidates, then normalizes. Two passes of modified
/// Gram-Schmidt per vector.
fn orthonormalize_against(
    fixed: &[Vec<Complex64>],
    candidates: Vec<Vec<Complex64>>,
    tol: f64,
) -> Result<Vec<Vec<Complex64>>> {
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(candidates.len());
    for (index, mut v) in candidates.into_iter().enumerate() {
        for _ in 0..2 {
            for u in fixed.iter().chain(out.iter()) {
                let proj = inner(u, &v);
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < tol {
            return Err(Error::LinearlyDependent { index });
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        out.push(v);
    }
    Ok(out)
}

pub fn gram_schmidt(vectors: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    if let Some(first) = vectors.first() {
        if let Some(bad) = vectors.iter().find(|v| v.len() != first.len()) {
            return Err(Error::DimensionMismatch {
                expected: first.len(),
                found: bad.len(),
            });
        }
    }
    orthonormalize_against(&[], vectors.to_vec(), GS_TOL)
}

/// A three-basis set built on the indices of one support arc.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedBases {
    pub bases: ThreeBasisSet,
    /// Parent index of each subspace coordinate.
    pub indices: Vec<usize>,
    pub parent_dim: usize,
}

impl AdaptedBases {
    pub fn sub_dim(&self) -> usize {
        self.indices.len()
    }

    pub fn embed_vector(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.parent_dim];
        for (&k, x) in self.indices.iter().zip(v) {
            out[k] = *x;
        }
        out
    }

    /// The three bases with every vector embedded in the parent space.
    pub fn embedded_vectors(&self) -> [Vec<Vec<Complex64>>; 3] {
        self.bases
            .bases()
            .map(|basis| basis.vectors.iter().map(|v| self.embed_vector(v)).collect())
    }

    pub fn embed_state(&self, sub: &PureState) -> Result<PureState> {
        make_state(&self.embed_vector(sub.amplitudes()))
    }

    /// Restriction of a parent-space state to the arc coordinates.
    pub fn restrict_state(&self, parent: &PureState) -> Result<PureState> {
        if parent.dim() != self.parent_dim {
            return Err(Error::DimensionMismatch {
                expected: self.parent_dim,
                found: parent.dim(),
            });
        }
        let sub: Vec<Complex64> = self.indices.iter().map(|&k| parent.amplitudes()[k]).collect();
        make_state(&sub)
    }
}

/// Bases for the subspace spanned by one cyclic arc of a `parent_dim`
/// dimensional space. Odd arcs are padded with the index following the arc.
pub fn adapt_to_support(arc: &[usize], parent_dim: usize, seed: u64) -> Result<AdaptedBases> {
    if arc.iter().any(|&k| k >= parent_dim) {
        return Err(Error::InvalidParams("arc index outside the parent dimension"));
    }
    let mut indices = arc.to_vec();
    if indices.len() % 2 == 1 {
        let next = (*indices.last().expect("odd length is non-empty") + 1) % parent_dim;
        if indices.contains(&next) {
            return Err(Error::SubspaceTooSmall { len: indices.len() });
        }
        indices.push(next);
    }
    if indices.len() < 4 {
        return Err(Error::SubspaceTooSmall { len: indices.len() });
    }
    let bases = random_three_bases(indices.len(), seed)?;
    Ok(AdaptedBases {
        bases,
        indices,
        parent_dim,
    })
}

/// True iff every entry of `G - I` is smaller than `tol` in modulus.
pub fn check_orthonormal(basis: &OrthonormalBasis, tol: f64) -> bool {
    let vs = &basis.vectors;
    if vs.iter().any(|v| v.len() != vs.len()) {
        return false;
    }
    for i in 0..vs.len() {
        for j in i..vs.len() {
            let g = inner(&vs[i], &vs[j]);
            let target = if i == j { 1.0 } else { 0.0 };
            if (g - target).norm() >= tol {
                return false;
            }
        }
    }
    true
}
