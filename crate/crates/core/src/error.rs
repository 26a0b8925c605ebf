use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("unknown mode label `{0}`")]
    UnknownMode(String),

    #[error("duplicate mode label `{0}`")]
    DuplicateMode(String),

    #[error("mode lists overlap on `{0}`")]
    OverlappingModes(String),

    #[error("mixed statistics within one state: `{0}` differs from the other modes")]
    MixedStatistics(String),

    #[error("occupation list has {got} entries, expected {expected}")]
    OccupationLength { expected: usize, got: usize },

    #[error("occupation {occupation} of mode `{mode}` exceeds its cap {cap}")]
    OccupationOutOfRange { mode: String, occupation: u32, cap: u32 },

    #[error("keep list is empty")]
    EmptyKeep,

    #[error("operands are defined over different mode lists")]
    BasisMismatch,

    #[error("matrix is not Hermitian (deviation {deviation:.3e} at ({row}, {col}))")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("matrix has a negative eigenvalue {0:.3e} below the PSD tolerance")]
    NotPositive(f64),

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Bogoliubov constraints violated (residuals {residuals:?})")]
    InvalidBogoliubov { residuals: [f64; 3] },

    #[error("squeeze matrix is non-normalizable: |s21| = {s21:.6} >= |s11| = {s11:.6}")]
    NonNormalizable { s11: f64, s21: f64 },

    #[error("malformed document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
