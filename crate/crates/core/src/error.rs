use std::fmt;

use thiserror::Error;

use crate::ingest::ParseDiagnostic;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid IRI {0:?}: {1}")]
    InvalidIri(String, &'static str),

    #[error("confidence {0} out of range [0, 1]")]
    ConfidenceOutOfRange(f64),

    #[error("duplicate mapping {0}")]
    DuplicateMapping(String),

    #[error("mapping endpoint {0} is not in the signature of {1}")]
    EndpointNotInSignature(String, String),

    #[error("entity {0} is not declared in graph {1}")]
    UndeclaredEntity(String, String),

    #[error("entity {0} declared with conflicting kinds {1} and {2}")]
    ConflictingKinds(String, crate::model::EntityKind, crate::model::EntityKind),

    #[error("axiom references {0}, which is not a class")]
    NotAClass(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Parse(#[from] ParseFailure),

    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One or more error diagnostics that aborted parsing of an input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseFailure {
    pub diagnostics: Vec<ParseDiagnostic>,
}

impl fmt::Display for ParseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for d in &self.diagnostics {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseFailure {}
