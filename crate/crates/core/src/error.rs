use thiserror::Error;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NilError {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative solver found no acceptable root.
    #[error("no solution: {0}")]
    NoSolution(String),
    /// Input points are degenerate for the requested construction.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// The two lattice generators have parallel projections onto the (x, y) plane.
    #[error("degenerate lattice: {0}")]
    DegenerateLattice(String),
}

pub type Result<T> = std::result::Result<T, NilError>;
