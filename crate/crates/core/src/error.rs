use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("mesh is empty: the shape is smaller than one cell at this resolution")]
    EmptyMesh,

    #[error("kernel singularity: {0}")]
    Singularity(String),

    #[error("kernel term {term} is not defined in dimension {dim}")]
    InvalidKernel { term: String, dim: usize },

    #[error("meshes overlap: nodes {distance:.3e} apart, cell size {h:.3e}")]
    Overlap { distance: f64, h: f64 },

    #[error("matrix is not symmetrizable: {0}")]
    NotSymmetrizable(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("log(δ k0 γ̂) vanishes (resonant logarithm); change δ or k0")]
    ResonantLogarithm,

    #[error("no physical root: {0}")]
    NoPhysicalRoot(String),

    #[error(
        "newton did not converge after {iterations} iterations \
         (best ω = {best}, residual {residual:.3e})"
    )]
    NonConvergence {
        best: Complex64,
        residual: f64,
        iterations: usize,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the `resonance` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Config(_) | Error::Io(_) => 2,
            Error::NonConvergence { .. } => 3,
            _ => 4,
        }
    }
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
