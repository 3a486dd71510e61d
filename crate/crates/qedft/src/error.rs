//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad user input: config files, parameter tables, invalid cells.
    #[error("configuration error: {0}")]
    Config(String),

    /// Symmetry reduction requested for a cell that does not support it.
    #[error("unsupported symmetry: {0}")]
    Symmetry(String),

    /// An iterative solver ran out of iterations.
    #[error("solver did not converge: {0}")]
    Convergence(String),

    /// Ill-conditioned or otherwise numerically unusable inputs.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Operands built on different grids, k-points or band counts.
    #[error("mismatched operands: {0}")]
    Mismatch(String),

    /// An orbital set failed its orthonormality precondition.
    #[error("non-orthonormal orbital set: {0}")]
    NonOrthonormal(String),

    /// Valid input, but a combination this crate does not implement.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    ConfigParse(#[from] toml::de::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for config-class errors, 3 for
    /// solver-class failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::ConfigParse(_)
            | Error::Symmetry(_)
            | Error::Unsupported(_)
            | Error::NonOrthonormal(_)
            | Error::Mismatch(_) => 2,
            Error::Convergence(_) | Error::Numerical(_) => 3,
            Error::Io(_) => 1,
        }
    }
}
