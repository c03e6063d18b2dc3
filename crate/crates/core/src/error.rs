use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("negative weight for step ({i},{j})")]
    NegativeWeight { i: i8, j: i8 },
    #[error("all weights other than the stationary one are zero")]
    AllZeroWeights,
    #[error("invalid model document: {0}")]
    Document(String),
    #[error("t must lie strictly between 0 and 1, got {0}")]
    InvalidT(String),
    #[error("operation requires an elliptic model, got {0}")]
    NotElliptic(String),
    #[error("kernel fiber is identically zero over {0}")]
    DegenerateFiber(String),
    #[error("negative radicand at y = {0}")]
    NonRealRegion(f64),
    #[error("discriminant roots are not numerically separated")]
    RootsNotSeparated,
    #[error("argument lies on the period lattice")]
    PoleAtLattice,
    #[error("u = {u} lies below e1 = {e1}")]
    OutOfBranch { u: f64, e1: f64 },
    #[error("group generator undefined at probe")]
    IndeterminateAtProbe,
    #[error("every sample landed near a pole")]
    AllSamplesNearPoles,
    #[error("rational root interpolation is ambiguous")]
    InterpolationAmbiguous,
    #[error("no sample point found where both coordinates lie in the unit disk")]
    NoSampleInDomain,
    #[error("Newton iteration did not converge")]
    NonConvergence,
    #[error("functional equation fails at coefficient x^{i} y^{j} t^{k}")]
    FunctionalEquationMismatch { i: usize, j: usize, k: usize },
}
