use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::lattice::RootRejection;
use crate::linalg::Signature;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("vector is zero")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is empty")]
    EmptyMatrix,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric: entry ({0}, {1}) differs from its transpose")]
    NotSymmetric(usize, usize),
    #[error("form is not Lorentzian: signature is {0}")]
    NotLorentzian(Signature),
    #[error("not a root: {0}")]
    NotARoot(RootRejection),
    #[error("invalid candidate root norm {0}")]
    InvalidNorm(BigInt),
    #[error("inconsistent seed roots: {0}")]
    InconsistentSeeds(String),
    #[error("basepoint has non-negative norm {0}")]
    InvalidBasepoint(BigInt),
    #[error("weight ceiling {0} reached without accepting a root")]
    Exhausted(BigRational),
    #[error("the lattice has no candidate root norms")]
    NoCandidateNorms,
    #[error("roots form an obtuse angle (inner product {0} > 0)")]
    ObtuseAngle(BigInt),
    #[error("no Coxeter angle matches inner^2 = {inner_sq}, norm product = {norm_product}")]
    InvalidDihedralAngle {
        inner_sq: BigInt,
        norm_product: BigInt,
    },
    #[error("hyperbolic dimension {0} is too small for the finite-volume criterion")]
    DimensionTooSmall(usize),
    #[error("subscheme enumeration aborted: {vertices} vertices exceeds the cutoff {cutoff}")]
    SubschemeCutoff { vertices: usize, cutoff: usize },
    #[error("paired roots have different norms ({0} and {1})")]
    NormMismatch(BigInt, BigInt),
    #[error("the paired roots span a degenerate subspace")]
    DegeneratePairing,
    #[error("matrix is not an isometry of the lattice")]
    NotAnIsometry,
    #[error("restricted form content {content} is not divisible by the norm {norm}")]
    NonIntegralScaling { norm: BigInt, content: BigInt },
    #[error("cross coefficient of x{i}*x{j} is odd ({value}); half-integral Gram matrices are not supported")]
    OddCrossCoefficient { i: usize, j: usize, value: BigInt },
    #[error("parse error: {0}")]
    Parse(String),
}
