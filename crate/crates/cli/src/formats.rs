//! JSON documents: counts files, basis sets, estimation reports and sweep
//! configurations. Unknown keys are rejected everywhere.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tribasis::{
    three_bases, three_bases_with_completion, BasisId, CountRecord, EstimationReport, Method,
    PairBasisParams, PureState, RetryPolicy, SweepConfig, ThreeBasisSet, VectorRole,
};

use crate::error::{CliError, CliResult};

pub type Pair = [f64; 2];

pub fn to_pairs(v: &[Complex64]) -> Vec<Pair> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn from_pairs(v: &[Pair]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisParamsDoc {
    pub a: f64,
    pub b: f64,
    pub phases: Vec<f64>,
}

impl From<&PairBasisParams> for BasisParamsDoc {
    fn from(p: &PairBasisParams) -> Self {
        Self {
            a: p.a(),
            b: p.b(),
            phases: p.phases().to_vec(),
        }
    }
}

impl BasisParamsDoc {
    pub fn to_params(&self) -> tribasis::Result<PairBasisParams> {
        PairBasisParams::new(self.a, self.b, self.phases.clone())
    }
}

/// Completion vectors of both modified pair bases, for data taken in
/// randomized bases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompletionDoc {
    #[serde(rename = "B1p")]
    pub b1p: Vec<Vec<Pair>>,
    #[serde(rename = "B3p")]
    pub b3p: Vec<Vec<Pair>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordDoc {
    pub basis: String,
    pub counts: Vec<u64>,
    pub shots: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountsFile {
    pub dimension: usize,
    pub basis_params: BasisParamsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completion_vectors: Option<CompletionDoc>,
    pub records: Vec<RecordDoc>,
}

fn completion_of(basis: &tribasis::OrthonormalBasis) -> Vec<Vec<Pair>> {
    basis
        .vectors_with(VectorRole::Completion)
        .into_iter()
        .map(to_pairs)
        .collect()
}

impl CountsFile {
    pub fn new(params: &PairBasisParams, bases: Option<&ThreeBasisSet>, records: &[CountRecord]) -> Self {
        Self {
            dimension: 2 * params.phases().len(),
            basis_params: params.into(),
            completion_vectors: bases.filter(|b| b.randomized).map(|b| CompletionDoc {
                b1p: completion_of(&b.b1p),
                b3p: completion_of(&b.b3p),
            }),
            records: records
                .iter()
                .map(|r| RecordDoc {
                    basis: r.basis().name().to_string(),
                    counts: r.counts().to_vec(),
                    shots: r.shots(),
                })
                .collect(),
        }
    }

    /// Validated count records; `path` labels schema errors.
    pub fn records(&self, path: &str) -> CliResult<Vec<CountRecord>> {
        let schema = |message: String| CliError::Schema {
            path: path.to_string(),
            message,
        };
        self.records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let id: BasisId = r
                    .basis
                    .parse()
                    .map_err(|_| schema(format!("records[{i}].basis: unknown basis `{}`", r.basis)))?;
                if r.counts.len() != self.dimension {
                    return Err(schema(format!(
                        "records[{i}].counts: expected {} entries, found {}",
                        self.dimension,
                        r.counts.len()
                    )));
                }
                CountRecord::with_shots(id, r.counts.clone(), r.shots)
                    .map_err(|e| schema(format!("records[{i}]: {e}")))
            })
            .collect()
    }

    pub fn params(&self, path: &str) -> CliResult<PairBasisParams> {
        let params = self.basis_params.to_params().map_err(|e| CliError::Schema {
            path: path.to_string(),
            message: format!("basis_params: {e}"),
        })?;
        if 2 * params.phases().len() != self.dimension {
            return Err(CliError::Schema {
                path: path.to_string(),
                message: format!("basis_params.phases: expected {} entries", self.dimension / 2),
            });
        }
        Ok(params)
    }

    pub fn three_bases(&self, path: &str) -> CliResult<ThreeBasisSet> {
        let params = self.params(path)?;
        let set = match &self.completion_vectors {
            None => three_bases(self.dimension, &params),
            Some(c) => three_bases_with_completion(
                &params,
                c.b1p.iter().map(|v| from_pairs(v)).collect(),
                c.b3p.iter().map(|v| from_pairs(v)).collect(),
            ),
        };
        set.map_err(|e| CliError::Schema {
            path: path.to_string(),
            message: format!("bases: {e}"),
        })
    }

    /// Five-basis data carries `B1`..`B4` instead of `B1p`/`B3p`.
    pub fn method(&self) -> Method {
        if self.records.iter().any(|r| r.basis == "B1p" || r.basis == "B3p") {
            Method::ThreeBases
        } else {
            Method::FiveBases
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDoc {
    pub id: String,
    pub vectors: Vec<Vec<Pair>>,
}

/// Full basis set, with every vector written out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSetDoc {
    pub dimension: usize,
    pub a: f64,
    pub b: f64,
    pub phases: Vec<f64>,
    pub randomized: bool,
    pub bases: Vec<BasisDoc>,
}

impl From<&ThreeBasisSet> for BasisSetDoc {
    fn from(set: &ThreeBasisSet) -> Self {
        Self {
            dimension: set.dim(),
            a: set.params.a(),
            b: set.params.b(),
            phases: set.params.phases().to_vec(),
            randomized: set.randomized,
            bases: set
                .bases()
                .into_iter()
                .map(|b| BasisDoc {
                    id: b.id.name().to_string(),
                    vectors: b.vectors.iter().map(|v| to_pairs(v)).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagsDoc {
    pub ambiguous_support: bool,
    pub equal_pairs_detected: bool,
    pub likelihood_tie: bool,
    pub clamped_k: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankedDoc {
    pub signs: Vec<i8>,
    pub loglik: f64,
}

pub const RANKING_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub method: String,
    pub dimension: usize,
    pub estimate: Vec<Pair>,
    pub chosen_signs: Vec<i8>,
    pub flags: FlagsDoc,
    /// Top candidates by log-likelihood.
    pub ranking: Vec<RankedDoc>,
    pub retries: u32,
    pub basis_params: BasisParamsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_set: Option<BasisSetDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infidelity: Option<f64>,
}

impl ReportDoc {
    pub fn new(report: &EstimationReport, truth: Option<(&PureState, f64)>) -> Self {
        Self {
            method: report.method.name().to_string(),
            dimension: report.estimate.dim(),
            estimate: to_pairs(report.estimate.amplitudes()),
            chosen_signs: report.chosen_signs.0.clone(),
            flags: FlagsDoc {
                ambiguous_support: report.flags.ambiguous_support,
                equal_pairs_detected: report.flags.equal_pairs_detected,
                likelihood_tie: report.flags.likelihood_tie,
                clamped_k: report.flags.clamped_k.clone(),
            },
            ranking: report
                .ranking
                .iter()
                .take(RANKING_LIMIT)
                .map(|c| RankedDoc {
                    signs: c.signs.0.clone(),
                    loglik: c.loglik,
                })
                .collect(),
            retries: report.retries,
            basis_params: (&report.params).into(),
            basis_set: report.basis_set.as_ref().filter(|b| b.randomized).map(Into::into),
            truth: truth.map(|(t, _)| to_pairs(t.amplitudes())),
            infidelity: truth.map(|(_, f)| f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MethodDoc {
    #[serde(rename = "3bb")]
    ThreeBases,
    #[serde(rename = "5bb")]
    FiveBases,
}

impl From<MethodDoc> for Method {
    fn from(m: MethodDoc) -> Self {
        match m {
            MethodDoc::ThreeBases => Method::ThreeBases,
            MethodDoc::FiveBases => Method::FiveBases,
        }
    }
}

fn default_method() -> MethodDoc {
    MethodDoc::ThreeBases
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfigDoc {
    pub dimensions: Vec<usize>,
    pub shots: Vec<u64>,
    /// Haar states per dimension.
    pub states: usize,
    /// Trials per state.
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_method")]
    pub method: MethodDoc,
    /// Randomized re-draws per trial; absent or 0 keeps the fixed bases.
    #[serde(default)]
    pub retries: u32,
}

impl SweepConfigDoc {
    pub fn to_config(&self) -> SweepConfig {
        SweepConfig {
            dimensions: self.dimensions.clone(),
            shots_grid: self.shots.clone(),
            states: self.states,
            trials: self.trials,
            seed: self.seed,
            method: self.method.into(),
            retry: match self.retries {
                0 => RetryPolicy::None,
                n => RetryPolicy::Randomize { max_retries: n },
            },
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}
