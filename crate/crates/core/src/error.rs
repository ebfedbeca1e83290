use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    InvalidField { field: &'static str, reason: String },

    #[error("label {label} at (row {row}, col {col}) is outside [0, {num_classes})")]
    LabelOutOfRange {
        row: usize,
        col: usize,
        label: u32,
        num_classes: usize,
    },

    #[error("probability {value} for class {class} at (row {row}, col {col}) is outside [0, 1]")]
    ProbabilityOutOfRange {
        row: usize,
        col: usize,
        class: usize,
        value: f32,
    },

    #[error("probabilities at (row {row}, col {col}) sum to {sum}, expected 1 within 1e-4")]
    ProbabilityNotNormalized { row: usize, col: usize, sum: f64 },

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f32 },

    #[error("{what} mismatch: expected {expected}, found {found}")]
    Mismatch {
        what: &'static str,
        expected: String,
        found: String,
    },

    #[error("zero probability for ground-truth class {class} at (row {row}, col {col}); loss is infinite")]
    NonFiniteLoss { row: usize, col: usize, class: usize },

    #[error("confusion matrix is empty")]
    EmptyConfusion,

    #[error("pyramid level {level} exceeds top level {levels}")]
    LevelOutOfRange { level: usize, levels: usize },

    #[error("keypoint ({x}, {y}) is closer than {margin} px to the image border")]
    MarginViolation { x: usize, y: usize, margin: usize },

    #[error("need at least {need} {what} descriptors, got {have}")]
    NotEnoughDescriptors {
        what: &'static str,
        need: usize,
        have: usize,
    },

    #[error("landmark index is empty")]
    EmptyIndex,

    #[error("duplicate landmark id {0}")]
    DuplicateId(u64),

    #[error("unknown landmark id {0}")]
    UnknownId(u64),

    #[error("{context}: {reason}")]
    Format { context: String, reason: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidField {
            field,
            reason: reason.into(),
        }
    }

    pub fn mismatch(
        what: &'static str,
        expected: impl ToString,
        found: impl ToString,
    ) -> Self {
        Error::Mismatch {
            what,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
