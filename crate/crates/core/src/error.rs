use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("near-degenerate target: separation {separation:e} below {threshold:e}; use a full decomposition")]
    NearDegenerate { separation: f64, threshold: f64 },
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
