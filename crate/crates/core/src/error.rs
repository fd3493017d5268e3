use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = GeomError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("matrix does not preserve the Hermitian form (defect {defect:.3e})")]
    NotIsometry { defect: f64 },

    #[error("rotation block is not unitary (defect {defect:.3e})")]
    NonUnitary { defect: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("classification is ambiguous within tolerance; eigenvalues {eigenvalues:?}")]
    Borderline { eigenvalues: Vec<Complex64> },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("pole: the point is mapped to infinity")]
    Pole,

    #[error("the point at infinity has no horospherical coordinates")]
    PointAtInfinity,

    #[error("invalid packing: balls {i} and {j} are not disjoint (center distance {distance:.6}, radii sum {radii_sum:.6})")]
    InvalidPacking {
        i: usize,
        j: usize,
        distance: f64,
        radii_sum: f64,
    },

    #[error("ping-pong certificate failed for pair ({i}, {j}): margin {margin:.3e}")]
    CertificateFailed { i: usize, j: usize, margin: f64 },

    #[error("enumeration budget of {budget} elements exceeded; completed radius {completed_radius}")]
    Budget {
        budget: usize,
        completed_radius: usize,
    },

    #[error("Dirichlet center is fixed by the nontrivial element {word}")]
    DegenerateCenter { word: String },

    #[error("degenerate point set: {0}")]
    DegeneratePointSet(String),

    #[error("point lies on a branch boundary of the bending map")]
    BranchBoundary,

    #[error("invariance error: {0}")]
    Invariance(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("coincident boundary points")]
    CoincidentPoints,
}

impl GeomError {
    pub(crate) fn dim(expected: usize, found: usize) -> Self {
        GeomError::Dimension { expected, found }
    }
}
