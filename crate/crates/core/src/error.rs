use thiserror::Error;

use crate::laurent::LatticePoint;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("exponent overflow: {0}")]
    ExponentOverflow(String),

    #[error("the zero polynomial has no Newton polytope")]
    ZeroPolynomial,

    #[error("Newton polytope has dimension {dim}, but dimension 2 is required")]
    LowDimension { dim: usize },

    #[error("zero vector has no primitive direction")]
    ZeroVector,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },

    #[error("face is not a face of this polynomial's Newton polytope")]
    FaceMismatch,

    #[error("the full polytope only has the trivial cone {{0}}")]
    WholePolytopeCone,

    #[error("degenerate on face {face}: singular torus point {witness:?}")]
    Degenerate { face: String, witness: (u64, u64) },

    #[error("pole hit: denominator factor {factor} vanishes at s = {s}")]
    PoleHit { factor: String, s: f64 },

    #[error("s = {s} outside the oracle range (0, {alpha})")]
    OracleRange { s: f64, alpha: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax { pos, msg: msg.into() }
    }

    pub(crate) fn overflow_at(p: LatticePoint) -> Self {
        Error::ExponentOverflow(format!("exponent pair {p} leaves the signed 64-bit range"))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
