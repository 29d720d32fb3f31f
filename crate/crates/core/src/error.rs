use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient a_{{{m},{k}}} undefined for ell = {ell} (need 0 <= k < m <= ell)")]
    CoefficientRange { ell: usize, m: usize, k: usize },

    #[error("basis label {label} out of range 0..={max}")]
    LabelRange { label: usize, max: usize },

    #[error("the parameter y must be non-zero here")]
    ZeroY,

    #[error("chain length {len} is too short (need at least {min})")]
    LengthTooShort { len: usize, min: usize },

    #[error("length mismatch: {context} (expected {expected}, got {got})")]
    LengthMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("ell mismatch: {a} vs {b}")]
    EllMismatch { a: usize, b: usize },

    #[error("dimension {dim} exceeds the dense cap {cap}; use the Lanczos solver")]
    DimensionCap { dim: usize, cap: usize },

    #[error("Lanczos did not converge after {cycles} restarts (residual {residual:e})")]
    NotConverged { cycles: usize, residual: f64 },

    #[error("expected exactly one zero-energy state, found {found} below {threshold:e}")]
    ZeroMultiplicity { found: usize, threshold: f64 },

    #[error("numerical rank indeterminate: singular value {sigma:e} lies in the ambiguity band")]
    RankIndeterminate { sigma: f64 },

    #[error("input is not annihilated by {which} (residual {residual:e})")]
    NotClosed { which: &'static str, residual: f64 },

    #[error("ill-conditioned least-squares design (condition number {cond:e})")]
    IllConditioned { cond: f64 },

    #[error("need at least {need} data points, got {got}")]
    TooFewPoints { need: usize, got: usize },

    #[error("invalid partition: {0}")]
    Partition(String),

    #[error("the overlap vanishes for these parities, so the fidelity is undefined")]
    VanishingOverlap,

    #[error("only available for ell = 1 (got ell = {0})")]
    SpinHalfOnly(usize),

    #[error("scaling variable x = {0} must lie strictly between 0 and 1")]
    ScalingVariable(f64),

    #[error("malformed sparse map data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
