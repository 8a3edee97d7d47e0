use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry in {0}")]
    NonFinite(String),

    #[error("expected a square pencil, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    /// Rank decisions could not be made consistently at the current tolerance.
    #[error("tolerance ambiguity: {0}")]
    ToleranceAmbiguity(String),

    #[error("structure contains singular blocks; only J and N blocks are supported here")]
    RegularOnly,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("W{0}(λ, μ) is a singular bivariate pencil (det ≡ 0)")]
    NonRegularW(usize),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_ambiguity(&self) -> bool {
        matches!(self, Error::ToleranceAmbiguity(_))
    }
}
