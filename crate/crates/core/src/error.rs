use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid probe: {0}")]
    InvalidProbe(String),

    #[error("kinematically forbidden: excitation energy {excitation} >= probe energy {e0}")]
    KinematicallyForbidden { excitation: f64, e0: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("basis dimension {dimension} exceeds the cap of {cap} states")]
    Capacity { dimension: u128, cap: usize },

    #[error("degenerate ground state: gap {gap:e} below tolerance {tolerance:e}")]
    DegenerateGroundState { gap: f64, tolerance: f64 },

    #[error("eigensolver residual {residual:e} exceeds {bound:e} for eigenpair {index}")]
    EigenResidual { index: usize, residual: f64, bound: f64 },

    #[error("depletion solver failed: residual {residual:e} after {iterations} iterations (bracket [{lower:e}, {upper:e}])")]
    Convergence {
        residual: f64,
        iterations: usize,
        lower: f64,
        upper: f64,
    },

    #[error("root finding failed on bracket [{lower}, {upper}]: {reason}")]
    RootFinding {
        lower: f64,
        upper: f64,
        reason: String,
    },

    #[error("deviation undefined: every grid point was excluded by the floor")]
    UndefinedDeviation,

    #[error("spectrum cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
