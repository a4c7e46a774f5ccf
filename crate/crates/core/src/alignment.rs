//! Mappings `<e1, e2, r, c>`, alignments, and the aligned graph KG_M.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Axiom, Iri, KnowledgeGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    /// source ⊑ target
    Subsumed,
    /// source ⊒ target
    Subsumes,
    /// source ≡ target
    Equivalent,
}

impl Relation {
    /// Symbol used in alignment files.
    pub fn symbol(self) -> char {
        match self {
            Relation::Subsumed => '<',
            Relation::Subsumes => '>',
            Relation::Equivalent => '=',
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "<" => Some(Relation::Subsumed),
            ">" => Some(Relation::Subsumes),
            "=" => Some(Relation::Equivalent),
            _ => None,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Subsumed => "⊑",
            Relation::Subsumes => "⊒",
            Relation::Equivalent => "≡",
        })
    }
}

/// Identity of a mapping inside an alignment: (source, target, relation).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MappingKey {
    pub source: Iri,
    pub target: Iri,
    pub relation: Relation,
}

impl MappingKey {
    pub fn new(source: Iri, target: Iri, relation: Relation) -> Self {
        MappingKey { source, target, relation }
    }

    pub fn touches(&self, iri: &Iri) -> bool {
        &self.source == iri || &self.target == iri
    }
}

impl fmt::Display for MappingKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.source, self.relation, self.target)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mapping {
    pub source: Iri,
    pub target: Iri,
    pub relation: Relation,
    confidence: f64,
}

impl Mapping {
    pub fn new(source: Iri, target: Iri, relation: Relation, confidence: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&confidence) {
            return Err(Error::ConfidenceOutOfRange(confidence));
        }
        Ok(Mapping { source, target, relation, confidence })
    }

    pub fn equivalence(source: Iri, target: Iri, confidence: f64) -> Result<Self> {
        Mapping::new(source, target, Relation::Equivalent, confidence)
    }

    pub fn confidence(&self) -> f64 {
        self.confidence
    }

    pub fn key(&self) -> MappingKey {
        MappingKey::new(self.source.clone(), self.target.clone(), self.relation)
    }

    /// Subclass axioms contributed to KG_M: ≡ yields both directions.
    pub fn translate(&self) -> Vec<Axiom> {
        let (s, t) = (self.source.clone(), self.target.clone());
        match self.relation {
            Relation::Subsumed => vec![Axiom::subclass(s, t)],
            Relation::Subsumes => vec![Axiom::subclass(t, s)],
            Relation::Equivalent => vec![Axiom::subclass(s.clone(), t.clone()), Axiom::subclass(t, s)],
        }
    }
}

impl fmt::Display for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}, {}, {:.6}>", self.source, self.target, self.relation, self.confidence)
    }
}

/// A set of mappings keyed by (source, target, relation), iterated in key order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Alignment {
    mappings: BTreeMap<MappingKey, Mapping>,
}

impl Alignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_mappings(mappings: impl IntoIterator<Item = Mapping>) -> Result<Self> {
        let mut a = Alignment::new();
        for m in mappings {
            a.insert(m)?;
        }
        Ok(a)
    }

    pub fn insert(&mut self, mapping: Mapping) -> Result<()> {
        let key = mapping.key();
        if self.mappings.contains_key(&key) {
            return Err(Error::DuplicateMapping(key.to_string()));
        }
        self.mappings.insert(key, mapping);
        Ok(())
    }

    pub fn remove(&mut self, key: &MappingKey) -> Option<Mapping> {
        self.mappings.remove(key)
    }

    pub fn get(&self, key: &MappingKey) -> Option<&Mapping> {
        self.mappings.get(key)
    }

    pub fn contains_key(&self, key: &MappingKey) -> bool {
        self.mappings.contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.mappings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mappings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Mapping> {
        self.mappings.values()
    }

    pub fn keys(&self) -> impl Iterator<Item = &MappingKey> {
        self.mappings.keys()
    }

    /// Mappings whose source or target is `iri`.
    pub fn touching<'a>(&'a self, iri: &'a Iri) -> impl Iterator<Item = &'a Mapping> + 'a {
        self.mappings.values().filter(move |m| &m.source == iri || &m.target == iri)
    }

    /// Checks that every source is in Sig(kg1), every target in Sig(kg2), and
    /// both endpoints have the same entity kind.
    pub fn check_endpoints(&self, kg1: &KnowledgeGraph, kg2: &KnowledgeGraph) -> Result<()> {
        for m in self.iter() {
            let s = kg1
                .entity(&m.source)
                .ok_or_else(|| Error::EndpointNotInSignature(m.source.to_string(), kg1.id().into()))?;
            let t = kg2
                .entity(&m.target)
                .ok_or_else(|| Error::EndpointNotInSignature(m.target.to_string(), kg2.id().into()))?;
            if s.kind != t.kind {
                return Err(Error::Contract(format!("mapping {} relates a {} to a {}", m.key(), s.kind, t.kind)));
            }
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a Alignment {
    type Item = &'a Mapping;
    type IntoIter = std::collections::btree_map::Values<'a, MappingKey, Mapping>;

    fn into_iter(self) -> Self::IntoIter {
        self.mappings.values()
    }
}

/// Where an axiom of KG_M comes from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    Source,
    Target,
    Mapping(MappingKey),
}

/// An axiom of KG_M together with every input that contributes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedAxiom {
    pub axiom: Axiom,
    pub origins: BTreeSet<Origin>,
}

impl AlignedAxiom {
    pub fn mapping_keys(&self) -> impl Iterator<Item = &MappingKey> {
        self.origins.iter().filter_map(|o| match o {
            Origin::Mapping(k) => Some(k),
            _ => None,
        })
    }

    pub fn is_base(&self) -> bool {
        self.origins.iter().any(|o| matches!(o, Origin::Source | Origin::Target))
    }
}

/// Materializes KG_M = KG1 ∪ KG2 ∪ M as a duplicate-free axiom list in which
/// each axiom remembers its origins.
pub fn aligned_axioms(kg1: &KnowledgeGraph, kg2: &KnowledgeGraph, m: &Alignment) -> Result<Vec<AlignedAxiom>> {
    m.check_endpoints(kg1, kg2)?;
    let mut out: BTreeMap<Axiom, BTreeSet<Origin>> = BTreeMap::new();
    for ax in kg1.axioms() {
        out.entry(ax.clone()).or_default().insert(Origin::Source);
    }
    for ax in kg2.axioms() {
        out.entry(ax.clone()).or_default().insert(Origin::Target);
    }
    for mapping in m {
        for ax in mapping.translate() {
            out.entry(ax).or_default().insert(Origin::Mapping(mapping.key()));
        }
    }
    Ok(out.into_iter().map(|(axiom, origins)| AlignedAxiom { axiom, origins }).collect())
}
