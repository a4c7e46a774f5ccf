//! The FMA/NCI Lymphokine example: two correct equivalence mappings that
//! become jointly unsatisfiable through a disjointness axiom in NCI.
//!
//! Source graph: `Lymphokine ⊑ Protein`. Target graph:
//! `Therapeutic_Lymphokine ⊑ Pharmacologic_Substance` and
//! `Protein ⊓ Pharmacologic_Substance ⊑ ⊥`.

use crate::alignment::{Alignment, Mapping};
use crate::ingest::{parse_ontology, read_alignment};
use crate::model::{Iri, KnowledgeGraph};

pub const FMA_TTL: &str = include_str!("../fixtures/lymphokine/fma.ttl");
pub const NCI_TTL: &str = include_str!("../fixtures/lymphokine/nci.ttl");
pub const REFERENCE_TSV: &str = include_str!("../fixtures/lymphokine/reference.tsv");
pub const CANDIDATES_TSV: &str = include_str!("../fixtures/lymphokine/candidates.tsv");

pub const FMA: &str = "http://purl.org/sig/ont/fma/";
pub const NCI: &str = "http://ncicb.nci.nih.gov/xml/owl/EVS/Thesaurus.owl#";

pub fn fma(local: &str) -> Iri {
    Iri::new(format!("{FMA}{local}")).expect("valid fixture IRI")
}

pub fn nci(local: &str) -> Iri {
    Iri::new(format!("{NCI}{local}")).expect("valid fixture IRI")
}

pub struct Lymphokine {
    pub source: KnowledgeGraph,
    pub target: KnowledgeGraph,
    /// `Protein ≡ Protein`, confidence 1.0
    pub m1: Mapping,
    /// `Lymphokine ≡ Therapeutic_Lymphokine`, confidence 0.5
    pub m2: Mapping,
}

impl Lymphokine {
    pub fn candidates(&self) -> Alignment {
        Alignment::from_mappings([self.m1.clone(), self.m2.clone()]).expect("distinct keys")
    }

    pub fn only_m1(&self) -> Alignment {
        Alignment::from_mappings([self.m1.clone()]).expect("distinct keys")
    }

    pub fn reference(&self) -> Alignment {
        read_alignment(REFERENCE_TSV, "reference.tsv").expect("valid fixture")
    }
}

pub fn lymphokine() -> Lymphokine {
    let source = parse_ontology(FMA_TTL, "fma", "fma.ttl").expect("valid fixture").value;
    let target = parse_ontology(NCI_TTL, "nci", "nci.ttl").expect("valid fixture").value;
    Lymphokine {
        source,
        target,
        m1: Mapping::equivalence(fma("Protein"), nci("Protein"), 1.0).expect("valid"),
        m2: Mapping::equivalence(fma("Lymphokine"), nci("Therapeutic_Lymphokine"), 0.5).expect("valid"),
    }
}
