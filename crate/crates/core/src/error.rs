use std::path::PathBuf;

use crate::correlation::FeaturePair;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("class column `{0}` not found")]
    ClassNotFound(String),
    #[error("class column `{0}` has no non-missing values")]
    ClassAllMissing(String),
    #[error("class column `{name}` needs at least 2 distinct labels, found {distinct}")]
    DegenerateClass { name: String, distinct: usize },
    #[error("column `{column}` has more than {max} distinct codes")]
    TooManyCategories { column: String, max: usize },
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("partition count {requested} out of range 1..={max}")]
    PartitionCount { requested: usize, max: usize },
    #[error("invalid feature pair ({0}, {1})")]
    InvalidPair(usize, usize),
    #[error("column index {index} out of range (dataset has {columns} columns)")]
    IndexOutOfRange { index: usize, columns: usize },
    #[error("contingency table shapes differ: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("contingency table is empty")]
    EmptyTable,
    #[error("feature {0} is not stored in any column partition")]
    CandidateNotFound(usize),
    #[error("invalid engine configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid synthetic-data parameters: {0}")]
    Synthetic(String),
    #[error("symmetrical uncertainty {0} is outside [0, 1] beyond round-off")]
    SuOutOfRange(f64),
    #[error("correlation for {0} was not computed before use")]
    MissingCorrelation(FeaturePair),
    #[error("output error: {0}")]
    Output(String),
}

impl Error {
    /// Errors that point at a bug rather than at bad input or configuration.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::SuOutOfRange(_) | Error::MissingCorrelation(_) | Error::DimensionMismatch { .. }
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
