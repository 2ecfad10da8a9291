use thiserror::Error;

pub type Result<T> = std::result::Result<T, FrameError>;

/// Errors raised by frame construction, analysis and I/O.
#[derive(Debug, Error)]
pub enum FrameError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("input is not a tight frame (relative residual {residual:.3e}, bound {bound:.3e})")]
    NotTight { residual: f64, bound: f64 },

    #[error("columns do not span the space (smallest frame operator eigenvalue {min_eigenvalue:.3e})")]
    NotAFrame { min_eigenvalue: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{m} vectors exceeds the subset search cap of {cap}; pass an explicit override")]
    SearchCapExceeded { m: usize, cap: usize },

    #[error("{p} is not a minimal divisor size (not in P) for m = {m}, n = {n}")]
    NotMinimalDivisor { n: usize, m: usize, p: usize },

    #[error("{size} is not an admissible divisor size (not in S) for m = {m}, n = {n}")]
    NotAdmissibleSize { n: usize, m: usize, size: usize },

    #[error("coset packing failed for size {size} (m = {m}, n = {n}): {detail}")]
    PackingFailed {
        n: usize,
        m: usize,
        size: usize,
        detail: String,
    },

    #[error("spectral tetris is infeasible for n = {n}, m = {m}: {detail}")]
    InfeasibleTetris { n: usize, m: usize, detail: String },

    #[error("subset is not a divisor: {0}")]
    NotADivisor(String),

    #[error("random draw was rank deficient after {attempts} attempts")]
    RankDeficientDraw { attempts: u32 },

    #[error("mismatch between closed-form and brute-force verdicts: {0}")]
    OracleMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl FrameError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        FrameError::InvalidParameter(msg.into())
    }
}
