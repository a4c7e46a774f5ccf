//! Ontology model: IRIs, entities with their four-way signature partition,
//! and the class-axiom fragment (subsumption, equivalence, disjointness).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An absolute IRI. Cheap to clone; compared byte for byte.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(value: impl AsRef<str>) -> Result<Self> {
        let value = value.as_ref();
        if value.is_empty() {
            return Err(Error::InvalidIri(value.to_owned(), "empty"));
        }
        if value.chars().any(|c| c.is_whitespace() || c.is_control()) {
            return Err(Error::InvalidIri(value.to_owned(), "contains whitespace or control characters"));
        }
        if value.chars().any(|c| matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')) {
            return Err(Error::InvalidIri(value.to_owned(), "contains a character not allowed in IRIs"));
        }
        if !has_scheme(value) {
            return Err(Error::InvalidIri(value.to_owned(), "not absolute (no scheme)"));
        }
        Ok(Iri(Arc::from(value)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The fragment or last path segment, used as a fallback display name.
    pub fn local_name(&self) -> &str {
        let s = self.as_str();
        s.rfind(['#', '/', ':']).map(|i| &s[i + 1..]).filter(|rest| !rest.is_empty()).unwrap_or(s)
    }
}

/// `scheme ":" ...` with scheme = ALPHA *( ALPHA / DIGIT / "+" / "-" / "." )
fn has_scheme(s: &str) -> bool {
    let Some(colon) = s.find(':') else {
        return false;
    };
    let scheme = &s[..colon];
    let mut chars = scheme.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Class,
    ObjectProperty,
    DataProperty,
    Individual,
}

impl EntityKind {
    pub const ALL: [EntityKind; 4] =
        [EntityKind::Class, EntityKind::ObjectProperty, EntityKind::DataProperty, EntityKind::Individual];
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityKind::Class => "class",
            EntityKind::ObjectProperty => "object property",
            EntityKind::DataProperty => "data property",
            EntityKind::Individual => "individual",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub text: String,
    pub lang: Option<String>,
}

impl Label {
    pub fn new(text: impl Into<String>) -> Self {
        Label { text: text.into(), lang: None }
    }

    pub fn with_lang(text: impl Into<String>, lang: impl Into<String>) -> Self {
        Label { text: text.into(), lang: Some(lang.into()) }
    }
}

/// A declared entity. The first label, when present, is the primary one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub iri: Iri,
    pub kind: EntityKind,
    labels: Vec<Label>,
}

impl Entity {
    pub fn new(iri: Iri, kind: EntityKind) -> Self {
        Entity { iri, kind, labels: Vec::new() }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn primary_label(&self) -> Option<&Label> {
        self.labels.first()
    }

    /// Appends a label. Empty texts and exact duplicates are ignored; returns
    /// whether the label was added.
    pub fn add_label(&mut self, label: Label) -> bool {
        if label.text.is_empty() || self.labels.contains(&label) {
            return false;
        }
        self.labels.push(label);
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    SubClassOf { sub: Iri, sup: Iri },
    EquivalentClass { a: Iri, b: Iri },
    DisjointWith { a: Iri, b: Iri },
}

impl Axiom {
    pub fn subclass(sub: Iri, sup: Iri) -> Self {
        Axiom::SubClassOf { sub, sup }
    }

    pub fn equivalent(a: Iri, b: Iri) -> Self {
        Axiom::EquivalentClass { a, b }
    }

    /// Disjointness in canonical operand order.
    pub fn disjoint(a: Iri, b: Iri) -> Self {
        if a <= b {
            Axiom::DisjointWith { a, b }
        } else {
            Axiom::DisjointWith { a: b, b: a }
        }
    }

    pub fn operands(&self) -> (&Iri, &Iri) {
        match self {
            Axiom::SubClassOf { sub, sup } => (sub, sup),
            Axiom::EquivalentClass { a, b } | Axiom::DisjointWith { a, b } => (a, b),
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::SubClassOf { sub, sup } => write!(f, "{sub} ⊑ {sup}"),
            Axiom::EquivalentClass { a, b } => write!(f, "{a} ≡ {b}"),
            Axiom::DisjointWith { a, b } => write!(f, "{a} ⊓ {b} ⊑ ⊥"),
        }
    }
}

/// An ontology: declared entities plus class-level axioms. Immutable once
/// built; axioms are kept sorted and duplicate free, so two graphs with the
/// same content compare equal regardless of construction order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeGraph {
    id: String,
    entities: BTreeMap<Iri, Entity>,
    axioms: Vec<Axiom>,
}

impl KnowledgeGraph {
    pub fn builder(id: impl Into<String>) -> KnowledgeGraphBuilder {
        KnowledgeGraphBuilder { id: id.into(), entities: BTreeMap::new(), axioms: BTreeSet::new() }
    }

    pub fn empty(id: impl Into<String>) -> Self {
        KnowledgeGraph { id: id.into(), entities: BTreeMap::new(), axioms: Vec::new() }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn entities(&self) -> impl ExactSizeIterator<Item = &Entity> {
        self.entities.values()
    }

    pub fn entity(&self, iri: &Iri) -> Option<&Entity> {
        self.entities.get(iri)
    }

    pub fn contains(&self, iri: &Iri) -> bool {
        self.entities.contains_key(iri)
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for e in self.entities.values() {
            sig.get_mut(e.kind).insert(e.iri.clone());
        }
        sig
    }
}

/// Sig(KG) partitioned into classes, object properties, data properties
/// and individuals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub classes: BTreeSet<Iri>,
    pub object_properties: BTreeSet<Iri>,
    pub data_properties: BTreeSet<Iri>,
    pub individuals: BTreeSet<Iri>,
}

impl Signature {
    pub fn get(&self, kind: EntityKind) -> &BTreeSet<Iri> {
        match kind {
            EntityKind::Class => &self.classes,
            EntityKind::ObjectProperty => &self.object_properties,
            EntityKind::DataProperty => &self.data_properties,
            EntityKind::Individual => &self.individuals,
        }
    }

    fn get_mut(&mut self, kind: EntityKind) -> &mut BTreeSet<Iri> {
        match kind {
            EntityKind::Class => &mut self.classes,
            EntityKind::ObjectProperty => &mut self.object_properties,
            EntityKind::DataProperty => &mut self.data_properties,
            EntityKind::Individual => &mut self.individuals,
        }
    }

    /// (|N_C|, |N_R|, |N_D|, |N_I|)
    pub fn counts(&self) -> (usize, usize, usize, usize) {
        (self.classes.len(), self.object_properties.len(), self.data_properties.len(), self.individuals.len())
    }

    pub fn len(&self) -> usize {
        let (c, r, d, i) = self.counts();
        c + r + d + i
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn all(&self) -> BTreeSet<Iri> {
        EntityKind::ALL.iter().flat_map(|k| self.get(*k).iter().cloned()).collect()
    }
}

pub struct KnowledgeGraphBuilder {
    id: String,
    entities: BTreeMap<Iri, Entity>,
    axioms: BTreeSet<Axiom>,
}

impl KnowledgeGraphBuilder {
    /// Declares an entity. Redeclaring with the same kind is a no-op.
    pub fn declare(&mut self, iri: Iri, kind: EntityKind) -> Result<&mut Entity> {
        let entity = self.entities.entry(iri.clone()).or_insert_with(|| Entity::new(iri, kind));
        if entity.kind != kind {
            return Err(Error::ConflictingKinds(entity.iri.to_string(), entity.kind, kind));
        }
        Ok(entity)
    }

    pub fn class(&mut self, iri: Iri, labels: impl IntoIterator<Item = Label>) -> Result<&mut Self> {
        let entity = self.declare(iri, EntityKind::Class)?;
        for label in labels {
            entity.add_label(label);
        }
        Ok(self)
    }

    pub fn entity_mut(&mut self, iri: &Iri) -> Option<&mut Entity> {
        self.entities.get_mut(iri)
    }

    pub fn kind_of(&self, iri: &Iri) -> Option<EntityKind> {
        self.entities.get(iri).map(|e| e.kind)
    }

    /// Queues an axiom; operands are checked in [`build`](Self::build) so
    /// declarations may follow their first use.
    pub fn axiom(&mut self, axiom: Axiom) -> &mut Self {
        let axiom = match axiom {
            Axiom::DisjointWith { a, b } => Axiom::disjoint(a, b),
            other => other,
        };
        self.axioms.insert(axiom);
        self
    }

    pub fn build(self) -> Result<KnowledgeGraph> {
        for axiom in &self.axioms {
            let (a, b) = axiom.operands();
            for iri in [a, b] {
                match self.entities.get(iri) {
                    None => return Err(Error::UndeclaredEntity(iri.to_string(), self.id.clone())),
                    Some(e) if e.kind != EntityKind::Class => return Err(Error::NotAClass(iri.to_string())),
                    Some(_) => {}
                }
            }
        }
        Ok(KnowledgeGraph { id: self.id, entities: self.entities, axioms: self.axioms.into_iter().collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn iri_validation() {
        assert!(Iri::new("http://example.org/a#B").is_ok());
        assert!(Iri::new("fma:Protein").is_ok());
        assert!(Iri::new("").is_err());
        assert!(Iri::new("http://example.org/a b").is_err());
        assert!(Iri::new("relative/path").is_err());
        assert!(Iri::new("1http:x").is_err());
        assert!(Iri::new("http://x/a>b").is_err());
        assert!(Iri::new("http://x/\u{7}").is_err());
    }

    #[test]
    fn local_names() {
        assert_eq!(iri("http://example.org/fma#Protein").local_name(), "Protein");
        assert_eq!(iri("http://example.org/fma/Protein").local_name(), "Protein");
        assert_eq!(iri("fma:Protein").local_name(), "Protein");
    }

    #[test]
    fn empty_graph_signature() {
        let kg = KnowledgeGraph::empty("g");
        assert_eq!(kg.signature().counts(), (0, 0, 0, 0));
    }

    #[test]
    fn signature_counts_and_partition() {
        let mut b = KnowledgeGraph::builder("g");
        b.declare(iri("ex:A"), EntityKind::Class).unwrap();
        b.declare(iri("ex:B"), EntityKind::Class).unwrap();
        b.declare(iri("ex:i"), EntityKind::Individual).unwrap();
        let kg = b.build().unwrap();
        let sig = kg.signature();
        assert_eq!(sig.counts(), (2, 0, 0, 1));
        assert_eq!(sig.len(), kg.entities().len());
        assert!(sig.classes.is_disjoint(&sig.individuals));
    }

    #[test]
    fn conflicting_kinds_rejected() {
        let mut b = KnowledgeGraph::builder("g");
        b.declare(iri("ex:A"), EntityKind::Class).unwrap();
        assert!(matches!(b.declare(iri("ex:A"), EntityKind::Individual), Err(Error::ConflictingKinds(..))));
    }

    #[test]
    fn disjointness_is_canonical_and_axioms_deduplicated() {
        let mut b = KnowledgeGraph::builder("g");
        b.class(iri("ex:A"), []).unwrap();
        b.class(iri("ex:B"), []).unwrap();
        b.axiom(Axiom::DisjointWith { a: iri("ex:B"), b: iri("ex:A") });
        b.axiom(Axiom::disjoint(iri("ex:A"), iri("ex:B")));
        let kg = b.build().unwrap();
        assert_eq!(kg.axioms(), &[Axiom::DisjointWith { a: iri("ex:A"), b: iri("ex:B") }]);
    }

    #[test]
    fn axiom_operands_must_be_declared_classes() {
        let mut b = KnowledgeGraph::builder("g");
        b.class(iri("ex:A"), []).unwrap();
        b.axiom(Axiom::subclass(iri("ex:A"), iri("ex:B")));
        assert!(matches!(b.build(), Err(Error::UndeclaredEntity(..))));

        let mut b = KnowledgeGraph::builder("g");
        b.class(iri("ex:A"), []).unwrap();
        b.declare(iri("ex:p"), EntityKind::ObjectProperty).unwrap();
        b.axiom(Axiom::subclass(iri("ex:A"), iri("ex:p")));
        assert!(matches!(b.build(), Err(Error::NotAClass(..))));
    }

    #[test]
    fn labels_skip_empty_and_duplicates() {
        let mut e = Entity::new(iri("ex:A"), EntityKind::Class);
        assert!(e.add_label(Label::new("Alpha")));
        assert!(!e.add_label(Label::new("Alpha")));
        assert!(e.add_label(Label::with_lang("Alpha", "en")));
        assert!(!e.add_label(Label::new("")));
        assert_eq!(e.primary_label().unwrap().text, "Alpha");
        assert_eq!(e.labels().len(), 2);
    }
}
