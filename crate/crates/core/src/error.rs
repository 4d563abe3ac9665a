use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A query read past the levels a finite presentation knows about.
    #[error("needs deeper presentation: level {requested} requested but only {available} levels are known")]
    NeedsDeeper { requested: usize, available: usize },

    #[error("malformed level sequence: {0}")]
    MalformedSequence(String),

    #[error("invalid level: {0}")]
    InvalidLevel(String),

    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),

    #[error("invalid matrix form: {0}")]
    InvalidMatrixForm(String),

    #[error("malformed premorphism: {0}")]
    MalformedPremorphism(String),

    #[error("paths span different levels ({left} vs {right})")]
    LevelMismatch { left: usize, right: usize },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid path length {length}: not a value of the level map")]
    InvalidLength { length: usize },

    #[error("partition is not a refinement: {0}")]
    NotRefinement(String),

    #[error("inconsistent path table: {0}")]
    InconsistentTable(String),

    #[error("period block is not primitive (stabilized zero pattern {pattern:?})")]
    NotPrimitive { pattern: Vec<Vec<bool>> },

    #[error("not certified: {0}")]
    NotCertified(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_needs_deeper(&self) -> bool {
        matches!(self, Error::NeedsDeeper { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
