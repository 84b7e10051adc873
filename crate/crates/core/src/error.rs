use thiserror::Error;

use crate::opalg::Param;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("axis {axis} is not valid for a {dim}-dimensional tensor")]
    InvalidAxis { axis: usize, dim: usize },
    #[error("no numeric value supplied for parameter '{}'", .0.name())]
    UnboundParameter(Param),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quantum numbers {0} are not representable: {1}")]
    Unrepresentable(String, String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("eigensolver failed to converge for eigenvalue {index}")]
    NoConvergence { index: usize },
    #[error("eigen-decomposition residual {residual:e} exceeds bound {bound:e}")]
    Inaccurate { residual: f64, bound: f64 },
    #[error("matrix is not Hermitian (max |A - A^H| = {0:e})")]
    NotHermitian(f64),
    #[error("level tracking failed: {0}")]
    Tracking(String),
    #[error("claims file: {0}")]
    Claims(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
