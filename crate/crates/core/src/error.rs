use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("kernel is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("kernel is empty")]
    EmptyKernel,

    #[error("kernel entry ({row}, {col}) = {value} lies outside [0, 1]")]
    ValueOutOfRange { row: usize, col: usize, value: f64 },

    #[error("kernel is asymmetric at ({row}, {col}): |W_ij - W_ji| = {diff:e}")]
    Asymmetric { row: usize, col: usize, diff: f64 },

    #[error("cell {cell} has zero degree")]
    ZeroDegreeCell { cell: usize },

    #[error("graphon is disconnected")]
    Disconnected,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cell index {index} out of range for {n} cells")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("non-finite value {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("set is empty")]
    EmptySet,

    #[error("set has zero volume")]
    ZeroVolume,

    #[error("function has zero norm")]
    ZeroFunction,

    #[error("k must be at least 1")]
    InvalidK,

    #[error("k = {k} exceeds the number of cells n = {n}")]
    KTooLarge { k: usize, n: usize },

    #[error("vector is not a unit vector (norm {norm})")]
    NonUnitVector { norm: f64 },

    #[error("no shift reached the mass threshold {required} (best {best} after {tries} tries)")]
    MassShortfall {
        best: f64,
        required: f64,
        tries: usize,
    },

    #[error("only {found} sets reach mass 1/2, need {k}")]
    InsufficientSets { found: usize, k: usize },

    #[error(
        "anchor sets {a} and {b} are {distance} apart, below the required separation {required}"
    )]
    SeparationViolation {
        a: usize,
        b: usize,
        distance: f64,
        required: f64,
    },

    #[error("anchor set {index} has mass {mass}, below 1/2")]
    MassViolation { index: usize, mass: f64 },

    #[error("sets overlap at cell {cell}")]
    OverlappingSets { cell: usize },

    #[error("enumeration of {count} assignments exceeds the limit {limit}")]
    TooLarge { count: u128, limit: u128 },

    #[error("certificate violated: {0}")]
    CertificateViolation(String),
}
