use thiserror::Error;

use crate::tropical::HullSegment;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Vertex indices carried by the variants are zero-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix rows have inconsistent lengths: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("a matrix must have at least one row")]
    EmptyMatrix,

    #[error("invalid forest query: {0}")]
    InvalidQuery(String),

    #[error("index {index} is out of range for {n} vertices")]
    InvalidIndex { index: usize, n: usize },

    #[error("arc ({from}, {to}) is not present in the host graph")]
    MissingArc { from: usize, to: usize },

    #[error("loops are not allowed in a forest host graph (vertex {0})")]
    LoopArc(usize),

    #[error("parent links do not describe a forest: {0}")]
    NotAForest(String),

    #[error("component {pivot} vanishes for this eigenvalue or the eigenvalue is not simple (zero denominator)")]
    ZeroDenominator { pivot: usize },

    #[error("permutation expansion refused for n = {n} (limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("numeric method did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("negation is not defined for asymptotic scalars")]
    NegationAttempted,

    #[error("invalid asymptotic rate: {0}")]
    InvalidRate(String),

    #[error("hull slopes coincide or a coefficient is tropically zero; only segment asymptotics are available")]
    DegenerateSlopes { segments: Vec<HullSegment> },

    #[error("invalid epsilon schedule: {0}")]
    InvalidEpsilon(String),
}
