use thiserror::Error;

/// Errors produced across the geometry pipeline.
#[derive(Debug, Error)]
pub enum GeomError {
    #[error("point {point:?} lies outside the chart domain")]
    OutsideDomain { point: Vec<f64> },

    #[error("metric is not positive definite at {point:?} (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { point: Vec<f64>, min_eigenvalue: f64 },

    #[error("metric components are not symmetric at {point:?} (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { point: Vec<f64>, asymmetry: f64 },

    #[error("spanning vectors are degenerate (g-angle below {tol:.1e})")]
    DegeneratePlane { tol: f64 },

    #[error("vector is not unit length: g(v,v) = {norm_sq}")]
    NotUnit { norm_sq: f64 },

    #[error("finite-difference stencil at {point:?} leaves the chart domain")]
    StencilOutsideDomain { point: Vec<f64> },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("warp profile is nonpositive at t = {t} (value {value})")]
    NonpositiveWarp { t: f64, value: f64 },

    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("profile grid needs at least {needed} points, got {got}")]
    GridTooCoarse { needed: usize, got: usize },

    #[error("volume curve is decreasing at t = {t}")]
    DecreasingVolume { t: f64 },

    #[error("triangle inequality violated: d_pq = {d_pq} > d_px + d_qx = {sum}")]
    TriangleViolation { d_pq: f64, sum: f64 },

    #[error("sample set is empty")]
    EmptySample,

    #[error("radii range spans {decades:.2} decades, need at least {needed:.1}")]
    RangeTooShort { decades: f64, needed: f64 },

    #[error("target unreachable within budget: {message}")]
    BudgetExceeded { message: String },

    #[error("method {method} is not applicable: {message}")]
    MethodInfeasible { method: &'static str, message: String },

    #[error("cap profile is not smooth at the origin: f'(0+) = {slope}, expected 1")]
    BadCap { slope: f64 },

    #[error("gradient profile vanishes non-integrably near u = {u}")]
    NonIntegrableGradient { u: f64 },

    #[error("conformal construction condition violated: {condition} (value {value:.3e}, bound {bound:.3e})")]
    ConditionViolated { condition: &'static str, value: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, GeomError>;
