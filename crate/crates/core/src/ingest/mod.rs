//! On-disk formats: a small Turtle subset for ontologies (`.ttl`) and a
//! tab-separated alignment format (`.tsv`).

mod tsv;
mod turtle;

use std::fmt;
use std::path::Path;

pub use tsv::{read_alignment, write_alignment};
pub use turtle::{parse_ontology, serialize_ontology};

use crate::alignment::Alignment;
use crate::error::{Error, ParseFailure};
use crate::model::KnowledgeGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

/// A located message about an input file. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub severity: Severity,
}

impl ParseDiagnostic {
    pub(crate) fn error(path: &str, line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic { path: path.to_owned(), line, column, message: message.into(), severity: Severity::Error }
    }

    pub(crate) fn warning(path: &str, line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic { severity: Severity::Warning, ..Self::error(path, line, column, message) }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}:{}: {sev}: {}", self.path, self.line, self.column, self.message)
    }
}

/// A successfully parsed value plus any warnings raised along the way.
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<ParseDiagnostic>,
}

/// Turns collected diagnostics into a result: any error aborts.
pub(crate) fn finish<T>(value: impl FnOnce() -> T, mut diags: Vec<ParseDiagnostic>) -> Result<Parsed<T>, ParseFailure> {
    diags.sort_by_key(|d| (d.line, d.column, d.severity));
    if diags.iter().any(ParseDiagnostic::is_error) {
        Err(ParseFailure { diagnostics: diags })
    } else {
        Ok(Parsed { value: value(), warnings: diags })
    }
}

fn read_to_string(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::File { path: path.display().to_string(), source })
}

/// Reads and parses an ontology file; the graph id is the file stem.
pub fn load_ontology(path: impl AsRef<Path>) -> Result<Parsed<KnowledgeGraph>, Error> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "kg".into());
    Ok(parse_ontology(&text, &id, &path.display().to_string())?)
}

pub fn load_alignment(path: impl AsRef<Path>) -> Result<Alignment, Error> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    Ok(read_alignment(&text, &path.display().to_string())?)
}
