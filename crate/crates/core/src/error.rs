use thiserror::Error;

use crate::Vector;

/// Largest ambient dimension accepted from callers.
pub const MAX_DIM: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {dim} exceeds the cap of {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("origin is not contained in the {which} operand")]
    OriginMissing { which: &'static str },
    #[error("point {0} is not in the set")]
    PointNotInSet(Vector),
    #[error("point {0} is outside the function domain")]
    PointOutsideDomain(Vector),
    #[error("no witness found: {0}")]
    NoWitness(String),
    #[error("direction {0} is not hypertangent")]
    NotHypertangent(Vector),
    #[error("rejection sampling found no point of the set within the trial budget")]
    SamplingStarved,
    #[error("no closedness decision procedure for {0}")]
    UnsupportedPair(String),
    #[error("invalid non-closedness witness: {0}")]
    InvalidWitness(String),
    #[error("cell algorithm produced a non-convex tangent set: {0}")]
    NonConvexClarkeCone(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn check_cap(dim: usize, max: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::Input("dimension must be positive".into()));
    }
    if dim > max {
        return Err(Error::DimensionTooLarge { dim, max });
    }
    Ok(())
}
