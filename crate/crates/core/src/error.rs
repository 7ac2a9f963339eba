use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix or vector has a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("eigenvalue at distance {distance:.3e} from -1 is inside the branch-cut guard {radius:e}")]
    BranchCut { distance: f64, radius: f64 },

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("zero vector")]
    ZeroVector,

    #[error(
        "overlap {re:.3e}{im:+.3e}i is outside Y+ (need real part in [0,1] and no imaginary part); use phase_extended_unitary"
    )]
    OutsideYPlus { re: f64, im: f64 },

    #[error("overlap magnitude {magnitude:.3e} is below {threshold:e}")]
    Orthogonal { magnitude: f64, threshold: f64 },

    #[error("matrix is not a projection (defect {defect:.3e})")]
    NotProjection { defect: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("state has overlap {overlap:.3e} with the projection, at or below {threshold:e}")]
    ZeroOverlap { overlap: f64, threshold: f64 },

    #[error("state is not supported on the projection (overlap {overlap})")]
    NotCaptured { overlap: f64 },

    #[error("reference state is not a product state (cut after factor {cut}, residual {residual:.3e})")]
    NotProduct { cut: usize, residual: f64 },

    #[error("precondition `{name}` violated: {detail}")]
    Precondition { name: &'static str, detail: String },

    #[error("consecutive overlap {overlap:.3e} at index {index} is not above 0.1; subdivide the path")]
    SubdivisionNeeded { index: usize, overlap: f64 },

    #[error("parameter out of range: {0}")]
    Range(String),

    #[error("{0}")]
    Obstruction(Box<Obstruction>),

    #[error("rotation parameters: {0}")]
    Rotation(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Why a construction could not be carried out at this dimension.
///
/// `condition` names the inequality that failed, e.g. `n <= 2r - 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Obstruction {
    pub stage: String,
    pub level: Option<usize>,
    pub family_dim: usize,
    pub corner_rank: usize,
    pub condition: String,
    pub detail: String,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "obstruction in {}", self.stage)?;
        if let Some(level) = self.level {
            write!(f, " at level {level}")?;
        }
        write!(
            f,
            ": family dimension {} with corner rank {} fails `{}` ({})",
            self.family_dim, self.corner_rank, self.condition, self.detail
        )
    }
}

impl Error {
    pub fn obstruction(&self) -> Option<&Obstruction> {
        match self {
            Error::Obstruction(o) => Some(o),
            _ => None,
        }
    }
}
