use alloc::boxed::Box;

use crate::measure::BasisId;
use crate::reconstruct::EstimationReport;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("all amplitudes vanish")]
    ZeroVector,
    #[error("unsupported dimension {0}: need an even dimension of at least 4")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid basis parameters: {0}")]
    InvalidParams(&'static str),
    #[error("random basis draw stayed degenerate after {attempts} attempts")]
    DegenerateDraw { attempts: usize },
    #[error("vector {index} is linearly dependent on its predecessors")]
    LinearlyDependent { index: usize },
    #[error("support of length {len} is too small for an adapted basis set (need at least 4)")]
    SubspaceTooSmall { len: usize },
    #[error("canonical frequencies split the support into {arcs} separate runs")]
    AmbiguousSupport { arcs: usize },
    #[error("no measurement record for basis {0}")]
    MissingRecord(BasisId),
    #[error("invalid count record: {0}")]
    InvalidCounts(&'static str),
    #[error("likelihood ties persisted after {retries} basis re-draws")]
    RetriesExhausted {
        retries: u32,
        report: Box<EstimationReport>,
    },
    #[error("empty input")]
    EmptyInput,
    #[error("candidate enumeration for dimension {0} exceeds the supported maximum of 24")]
    EnumerationTooLarge(usize),
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(&'static str),
}

pub fn check_dimension(d: usize) -> Result<()> {
    if d < 4 || !d.is_multiple_of(2) {
        return Err(Error::UnsupportedDimension(d));
    }
    Ok(())
}
