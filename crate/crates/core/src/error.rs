use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("simple roots are linearly dependent")]
    DependentSimpleRoots,
    #[error("multiplicity map is not Weyl-invariant: {0}")]
    MultiplicityNotInvariant(String),
    #[error("inner product is not valid: {0}")]
    BadInnerProduct(String),
    #[error("Weyl group of predicted order {order} exceeds the enumeration cap {cap}")]
    WeylCapExceeded { order: u128, cap: u128 },
    #[error("generator recovery needs rank {rank}, above the cap {cap}")]
    RankCapExceeded { rank: usize, cap: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("model invariant violated: {0}")]
    ModelInvariant(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("orbit enumeration: {0}")]
    Orbit(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}
