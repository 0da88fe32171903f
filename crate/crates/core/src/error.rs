use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong between reading a CSV and writing a report.
///
/// Variants are grouped by the process exit status they map to; see
/// [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {0} outside supported range 1..={max}", max = crate::qsim::MAX_QUBITS)]
    QubitCount(usize),

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("control and target are both qubit {0}")]
    ControlIsTarget(usize),

    #[error("gate {kind} is missing its {what}")]
    MalformedGate { kind: &'static str, what: &'static str },

    #[error("duplicate qubit {0} in observable")]
    DuplicateQubit(usize),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("column {0:?} not found in header")]
    MissingColumn(String),

    #[error("no usable rows ({skipped} rejected)")]
    NoRows { skipped: usize },

    #[error("dataset needs both classes present, class {0} has no rows")]
    MissingClass(u8),

    #[error("class {class} has {count} rows, need at least 2 to split")]
    ClassTooSmall { class: u8, count: usize },

    #[error("inconsistent inputs: {0}")]
    Consistency(String),

    #[error("objective returned non-finite value {value} at evaluation {eval}")]
    NonFinite { eval: usize, value: f64 },

    #[error("{0}")]
    Runtime(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// 2 for bad input, 3 for inputs that disagree with each other,
    /// 4 for failures while computing.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Consistency(_) => 3,
            Error::NonFinite { .. } | Error::Runtime(_) => 4,
            _ => 2,
        }
    }
}
