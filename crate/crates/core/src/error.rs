use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("rank {rank} exceeds degree cutoff {cutoff}")]
    Truncation { rank: usize, cutoff: usize },
    #[error("slot {slot} out of range for rank {rank}")]
    Slot { slot: usize, rank: usize },
    #[error("not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("outside oracle scope: {0}")]
    OracleScope(String),
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("degenerate structure: {0}")]
    Degenerate(String),
    #[error("series tail {tail:e} above tolerance at cutoff {cutoff}; increase the cutoff")]
    SeriesTail { tail: f64, cutoff: usize },
    #[error("ill-conditioned extraction: {0}")]
    Conditioning(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
