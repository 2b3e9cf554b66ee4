use thiserror::Error;

use crate::complex::Face;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("face {0:?} is not in canonical (strictly increasing) form")]
    NonCanonicalFace(Vec<usize>),

    #[error("face {face:?} uses vertex {vertex} but the complex has {n} vertices")]
    VertexOutOfRange { face: Vec<usize>, vertex: usize, n: usize },

    #[error("face {face:?} has dimension {dim}, above the top dimension {top}")]
    FaceAboveTopDimension { face: Vec<usize>, dim: i32, top: i32 },

    #[error("face {0} listed more than once")]
    DuplicateFace(Face),

    #[error("face {face} is missing its boundary face {missing}")]
    MissingSubface { face: Face, missing: Face },

    #[error("complete skeleton dimension {csd} is invalid for a {k}-dimensional complex on {n} vertices")]
    InvalidSkeletonDim { csd: i32, k: i32, n: usize },

    #[error("face {0} is not a face of the complex")]
    FaceNotInComplex(Face),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: i64, found: i64 },

    #[error("dimension {dim} is outside the valid range {lo}..={hi}")]
    DimensionOutOfRange { dim: i32, lo: i32, hi: i32 },

    #[error("enumeration needs 2^{log2_needed} elements but the budget is {budget}")]
    BudgetExceeded { log2_needed: u32, budget: u64 },

    #[error("complex is not pure: {0} faces of dimension k-1 have degree zero")]
    NotPure(usize),

    #[error("link of {0} has an isolated vertex")]
    IsolatedLinkVertex(Face),

    #[error("operation requires a complete {0}-skeleton")]
    IncompleteSkeleton(i32),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not square: {0} x {1}")]
    NotSquare(usize, usize),

    #[error("face {face} in dimension {dim} has nonpositive weight {weight}")]
    ZeroWeight { face: Face, dim: i32, weight: f64 },

    #[error("cochain lies in the trivial coset (its class norm is zero)")]
    TrivialClass,

    #[error("graph is not regular")]
    NotRegular,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph has no edges")]
    NoEdges,

    #[error("LAPACK routine {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 for budget refusals, 3 for
    /// violations of deterministic theorems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 2,
            Error::TheoremViolation(_) => 3,
            _ => 1,
        }
    }
}
