use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: ‖H − H*‖ = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("dimension {dim} is not supported here (need at least {min})")]
    Unsupported { dim: usize, min: usize },

    #[error("witness search failed: best residual {best_residual:e} above target {target:e}")]
    WitnessSearchFailed { best_residual: f64, target: f64 },

    #[error("weak duality violated: lhs {lhs} > rhs {rhs}")]
    WeakDualityViolated { lhs: f64, rhs: f64 },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Input errors as opposed to numerical failures.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::ShapeMismatch { .. }
                | Error::NotSquare { .. }
                | Error::NotHermitian { .. }
                | Error::Unsupported { .. }
                | Error::Json(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
