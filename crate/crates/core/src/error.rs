use crate::behavior::Party;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("expected {expected} entries, found {found}")]
    WrongLength { expected: usize, found: usize },

    #[error("entry {index} is not a finite number")]
    NonFinite { index: usize },

    #[error("entry {index} is negative ({value:e})")]
    NegativeProbability { index: usize, value: f64 },

    #[error("entry {index} exceeds one ({value:e})")]
    ProbabilityAboveOne { index: usize, value: f64 },

    #[error("settings (nu={nu}, mu={mu}) are not normalized (residual {residual:e})")]
    NotNormalized { nu: u8, mu: u8, residual: f64 },

    #[error(
        "signaling detected: {party:?} marginal for outcome {outcome} at setting {setting} depends on the other party's setting (residual {residual:e})"
    )]
    SignalingDetected {
        party: Party,
        outcome: u8,
        setting: u8,
        residual: f64,
    },

    #[error("conditioning on outcome {outcome} of setting {setting} has weight {weight:e}")]
    ZeroWeightCondition { setting: u8, outcome: u8, weight: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("column {column} of transfer matrix sums to {sum}")]
    InvalidTransferMatrix { column: usize, sum: f64 },

    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (pivot {pivot:e})")]
    NotPositive { pivot: f64 },

    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("basis is not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },

    #[error("unsupported dimension {dim}")]
    InvalidDimension { dim: usize },

    #[error("Bloch vector has norm {norm}")]
    NotUnitVector { norm: f64 },

    #[error("({alpha}, {beta}, {tau}) is not in the family simplex")]
    InvalidFamilyPoint { alpha: f64, beta: f64, tau: f64 },

    #[error("bad mixture weights: {0}")]
    BadWeights(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("verdict does not change along the ray")]
    NoSignChange,

    #[error("malformed behavior document: {0}")]
    Malformed(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("assertion failed: {0}")]
    AssertionFailed(String),

    #[error("table cell ({row}, {column}) is {found}, expected {expected}")]
    ReferenceMismatch {
        row: String,
        column: String,
        expected: String,
        found: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
