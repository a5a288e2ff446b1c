use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("axis {axis} out of range for dimension {dim} (axes are 1-based)")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("polynomial is not harmonic: degree-{degree} component has nonzero Laplacian")]
    NotHarmonic { degree: u32 },

    #[error("polynomial is not homogeneous of degree {0}")]
    NotHomogeneous(u32),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("inconsistent Kuran system: {0}")]
    InconsistentSystem(String),

    #[error("monotonicity certificate fails at k_max = {k_max}: sign of the ratio polynomial is only fixed beyond {root_bound}")]
    CertificateFailed { k_max: u64, root_bound: String },

    #[error("precision {requested:e} not reached within {iterations} refinements (last error estimate {achieved:e})")]
    PrecisionUnachievable {
        requested: f64,
        achieved: f64,
        iterations: usize,
    },

    #[error("ell constraints unsatisfiable: {0}")]
    EllUnsatisfiable(String),

    #[error("invalid radius: {0}")]
    InvalidRadius(String),

    #[error("{n} is not in A_{k}")]
    NotInIndexSet { n: u64, k: u32 },

    #[error("n = {n} lies below the block threshold {threshold} for k = {k}")]
    BelowThreshold { n: u64, k: u32, threshold: u64 },

    #[error("s = {s} is not in B(n = {n}, k = {k})")]
    NotInWindow { s: u64, n: u64, k: u32 },

    #[error("radius too large for k = {k}: ell_k = {ell} < (e r)^2 = {er2:.6}")]
    RadiusTooLarge { k: u32, ell: u64, er2: f64 },

    #[error("degree interval of block n = {n} reaches {upper}, overlapping the next block start {next}")]
    DegreeOverlap { n: u64, upper: u64, next: u64 },

    #[error("block n = {n} is owned by k = {k}, beyond the plan horizon k_max = {k_max}")]
    BeyondHorizon { n: u64, k: u32, k_max: u32 },

    #[error("series truncation not certified within {terms} terms")]
    TruncationNotCertified { terms: usize },

    #[error("tail bound not certified: {0}")]
    TailNotCertified(String),

    #[error("tail policy unsatisfied at r = {r}: {detail}")]
    TailPolicy { r: String, detail: String },

    #[error("sequence is not {0} as declared")]
    SequenceShape(String),

    #[error("no concavity onset found in [{start}, {end}]")]
    NoConcavityOnset { start: u64, end: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("expansion too large: {0}")]
    ExpansionTooLarge(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
