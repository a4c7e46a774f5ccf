//! Ontology alignment with logical repair.
//!
//! Two knowledge graphs are matched lexically into a candidate alignment,
//! the aligned graph is closed under subsumption with per-mapping
//! provenance, and a selector filters the candidates under one of several
//! consistency objectives. Evaluation against reference alignments, a
//! synthetic benchmark generator and a command-line front end round it out.
//!
//! ```
//! use kgalign::fixtures::lymphokine;
//! use kgalign::selector::{select_hard, Mode, SelectorConfig};
//!
//! let f = lymphokine();
//! let sel = select_hard(&f.source, &f.target, &f.candidates(), &SelectorConfig::with_mode(Mode::Hard)).unwrap();
//! assert_eq!(sel.alignment.len(), 1);
//! ```

pub mod alignment;
pub mod benchgen;
pub mod cli;
pub mod error;
pub mod evaluation;
pub mod fixtures;
pub mod ingest;
pub mod lexical;
pub mod model;
pub mod reasoner;
pub mod selector;

pub use alignment::{Alignment, Mapping, MappingKey, Relation};
pub use error::{Error, Result};
pub use model::{Axiom, Entity, EntityKind, Iri, KnowledgeGraph, Label};
