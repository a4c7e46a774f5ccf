//! Subsumption closure over the aligned graph with mapping provenance.
//!
//! Every derived subsumption `A ⊑* B` carries the minimal sets of mappings
//! it depends on. An axiom-only derivation has the empty support. A class is
//! unsatisfiable when it inherits two disjoint classes; its justifications
//! are the minimal unions of one support for each of the two inheritances.
//! Repairs only ever remove mappings, so ontology axioms are held fixed and
//! provenance ranges over mappings alone.

mod support;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use support::{Antichain, Insert, Support};

use crate::alignment::{aligned_axioms, Alignment, MappingKey};
use crate::error::{Error, Result};
use crate::model::{Axiom, Iri, KnowledgeGraph};

/// Default bound on stored support sets per subsumption pair.
pub const DEFAULT_J_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedSubsumption {
    pub sub: Iri,
    pub sup: Iri,
    pub supports: Vec<BTreeSet<MappingKey>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsatReport {
    pub concept: Iri,
    pub justifications: Vec<BTreeSet<MappingKey>>,
    pub involved_mappings: BTreeSet<MappingKey>,
}

impl UnsatReport {
    /// True when the concept is unsatisfiable from ontology axioms alone.
    pub fn is_axiom_only(&self) -> bool {
        self.justifications.iter().any(BTreeSet::is_empty)
    }
}

/// Indexed form of KG_M: class nodes, subclass edges labelled with supports,
/// and symmetric disjointness.
#[derive(Debug, Clone)]
struct SupportGraph {
    nodes: Vec<Iri>,
    index: HashMap<Iri, usize>,
    edges: Vec<Vec<(usize, Support)>>,
    disjoint: Vec<Vec<usize>>,
}

impl SupportGraph {
    fn new(nodes: impl IntoIterator<Item = Iri>) -> Self {
        let set: BTreeSet<Iri> = nodes.into_iter().collect();
        let nodes: Vec<Iri> = set.into_iter().collect();
        let index = nodes.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        SupportGraph { edges: vec![Vec::new(); nodes.len()], disjoint: vec![Vec::new(); nodes.len()], nodes, index }
    }

    fn node(&mut self, iri: &Iri) -> usize {
        if let Some(&i) = self.index.get(iri) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(iri.clone());
        self.index.insert(iri.clone(), i);
        self.edges.push(Vec::new());
        self.disjoint.push(Vec::new());
        i
    }

    fn add_axiom(&mut self, axiom: &Axiom, support: &Support) {
        match axiom {
            Axiom::SubClassOf { sub, sup } => {
                let (a, b) = (self.node(sub), self.node(sup));
                self.edges[a].push((b, support.clone()));
            }
            Axiom::EquivalentClass { a, b } => {
                let (a, b) = (self.node(a), self.node(b));
                self.edges[a].push((b, support.clone()));
                self.edges[b].push((a, support.clone()));
            }
            Axiom::DisjointWith { a, b } => {
                let (a, b) = (self.node(a), self.node(b));
                self.disjoint[a].push(b);
                if a != b {
                    self.disjoint[b].push(a);
                }
            }
        }
    }
}

/// Per-node ancestor antichains plus derived unsatisfiability.
struct RawClosure {
    ancestors: Vec<Vec<(usize, Antichain)>>,
    unsat: Vec<(usize, Antichain)>,
    truncated: bool,
}

fn saturate(g: &SupportGraph, j_cap: usize) -> RawClosure {
    let n = g.nodes.len();
    let mut truncated = false;
    let mut ancestors = Vec::with_capacity(n);
    let mut unsat = Vec::new();

    for start in 0..n {
        let mut reach: HashMap<usize, Antichain> = HashMap::new();
        let mut queue = VecDeque::new();
        reach.entry(start).or_default().insert(Support::empty(), j_cap);
        queue.push_back((start, Support::empty()));
        while let Some((b, s)) = queue.pop_front() {
            if !reach[&b].contains(&s) {
                continue;
            }
            for (c, e) in &g.edges[b] {
                let u = s.union(e);
                match reach.entry(*c).or_default().insert(u.clone(), j_cap) {
                    Insert::Added => queue.push_back((*c, u)),
                    Insert::Capped => truncated = true,
                    Insert::Dominated => {}
                }
            }
        }

        let mut just = Antichain::new();
        let mut reached: Vec<usize> = reach.keys().copied().collect();
        reached.sort_unstable();
        for x in reached {
            let sx = &reach[&x];
            for &y in &g.disjoint[x] {
                if y < x {
                    continue;
                }
                let Some(sy) = reach.get(&y) else { continue };
                for s1 in sx.members() {
                    for s2 in sy.members() {
                        if just.insert(s1.union(s2), j_cap) == Insert::Capped {
                            truncated = true;
                        }
                    }
                }
            }
        }
        if !just.is_empty() {
            just.sort();
            unsat.push((start, just));
        }

        let mut row: Vec<(usize, Antichain)> = reach.into_iter().collect();
        row.sort_by_key(|(i, _)| *i);
        for (_, a) in &mut row {
            a.sort();
        }
        ancestors.push(row);
    }
    RawClosure { ancestors, unsat, truncated }
}

/// Outcome of closing KG_M under subsumption.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    nodes: Vec<Iri>,
    index: HashMap<Iri, usize>,
    keys: Vec<MappingKey>,
    key_index: BTreeMap<MappingKey, u32>,
    ancestors: Vec<Vec<(usize, Vec<Support>)>>,
    unsat: Vec<UnsatReport>,
    involved: BTreeSet<MappingKey>,
    truncated: bool,
}

impl ClosureResult {
    fn support_keys(&self, s: &Support) -> BTreeSet<MappingKey> {
        s.indices().iter().map(|&i| self.keys[i as usize].clone()).collect()
    }

    /// Set when some support or justification set was dropped at the cap;
    /// completeness of the stored provenance is then not guaranteed.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Unsatisfiable concepts, sorted by IRI.
    pub fn unsat(&self) -> &[UnsatReport] {
        &self.unsat
    }

    pub fn is_unsat(&self, concept: &Iri) -> bool {
        self.unsat.binary_search_by(|r| r.concept.cmp(concept)).is_ok()
    }

    pub fn mapping_keys(&self) -> &[MappingKey] {
        &self.keys
    }

    /// Mappings that appear in some justification.
    pub fn involved_mappings(&self) -> &BTreeSet<MappingKey> {
        &self.involved
    }

    /// Minimal supports of `sub ⊑* sup`, or `None` when not derivable.
    pub fn supports(&self, sub: &Iri, sup: &Iri) -> Option<Vec<BTreeSet<MappingKey>>> {
        let a = *self.index.get(sub)?;
        let b = *self.index.get(sup)?;
        let row = &self.ancestors[a];
        let pos = row.binary_search_by_key(&b, |(i, _)| *i).ok()?;
        Some(row[pos].1.iter().map(|s| self.support_keys(s)).collect())
    }

    /// Whether `sub ⊑* sup` holds using only the mappings in `available`.
    pub fn entails_with(&self, sub: &Iri, sup: &Iri, available: &BTreeSet<MappingKey>) -> bool {
        self.supports(sub, sup).is_some_and(|ss| ss.iter().any(|s| s.is_subset(available)))
    }

    pub fn subsumptions(&self) -> Vec<DerivedSubsumption> {
        let mut out = Vec::new();
        for (a, row) in self.ancestors.iter().enumerate() {
            for (b, supports) in row {
                out.push(DerivedSubsumption {
                    sub: self.nodes[a].clone(),
                    sup: self.nodes[*b].clone(),
                    supports: supports.iter().map(|s| self.support_keys(s)).collect(),
                });
            }
        }
        out.sort_by(|x, y| (&x.sub, &x.sup).cmp(&(&y.sub, &y.sup)));
        out
    }

    /// Provenance-free view: every derivable (sub, sup) pair.
    pub fn subsumption_pairs(&self) -> BTreeSet<(Iri, Iri)> {
        let mut out = BTreeSet::new();
        for (a, row) in self.ancestors.iter().enumerate() {
            for (b, _) in row {
                out.insert((self.nodes[a].clone(), self.nodes[*b].clone()));
            }
        }
        out
    }
}

/// Reasoning context for a fixed pair of graphs; closures for different
/// alignments over the same pair reuse the indexed ontology axioms.
#[derive(Debug, Clone)]
pub struct Reasoner<'a> {
    kg1: &'a KnowledgeGraph,
    kg2: &'a KnowledgeGraph,
    base: SupportGraph,
    j_cap: usize,
}

impl<'a> Reasoner<'a> {
    pub fn new(kg1: &'a KnowledgeGraph, kg2: &'a KnowledgeGraph) -> Self {
        let sig = kg1.signature().all().into_iter().chain(kg2.signature().all());
        let mut base = SupportGraph::new(sig);
        let empty = Support::empty();
        for ax in kg1.axioms().iter().chain(kg2.axioms()) {
            base.add_axiom(ax, &empty);
        }
        Reasoner { kg1, kg2, base, j_cap: DEFAULT_J_CAP }
    }

    pub fn with_j_cap(mut self, j_cap: usize) -> Self {
        self.j_cap = j_cap.max(1);
        self
    }

    pub fn j_cap(&self) -> usize {
        self.j_cap
    }

    pub fn source(&self) -> &KnowledgeGraph {
        self.kg1
    }

    pub fn target(&self) -> &KnowledgeGraph {
        self.kg2
    }

    /// Closure of KG1 ∪ KG2 ∪ `m` with provenance.
    pub fn closure(&self, m: &Alignment) -> Result<ClosureResult> {
        m.check_endpoints(self.kg1, self.kg2)?;
        let keys: Vec<MappingKey> = m.keys().cloned().collect();
        let key_index: BTreeMap<MappingKey, u32> =
            keys.iter().cloned().enumerate().map(|(i, k)| (k, i as u32)).collect();

        let mut g = self.base.clone();
        for mapping in m {
            let support = Support::single(key_index[&mapping.key()]);
            for ax in mapping.translate() {
                g.add_axiom(&ax, &support);
            }
        }
        let raw = saturate(&g, self.j_cap);

        let ancestors = raw
            .ancestors
            .into_iter()
            .map(|row| row.into_iter().map(|(i, a)| (i, a.members().to_vec())).collect())
            .collect();
        let mut result = ClosureResult {
            nodes: g.nodes,
            index: g.index,
            keys,
            key_index,
            ancestors,
            unsat: Vec::new(),
            involved: BTreeSet::new(),
            truncated: raw.truncated,
        };
        let mut unsat: Vec<UnsatReport> = raw
            .unsat
            .into_iter()
            .map(|(node, just)| {
                let justifications: Vec<_> = just.members().iter().map(|s| result.support_keys(s)).collect();
                let involved_mappings = justifications.iter().flatten().cloned().collect();
                UnsatReport { concept: result.nodes[node].clone(), justifications, involved_mappings }
            })
            .collect();
        unsat.sort_by(|a, b| a.concept.cmp(&b.concept));
        result.involved = unsat.iter().flat_map(|r| r.involved_mappings.iter().cloned()).collect();
        result.unsat = unsat;
        if result.truncated {
            log::warn!("closure truncated at {} supports per pair", self.j_cap);
        }
        Ok(result)
    }

    /// Unsatisfiable concepts of KG1 ∪ KG2 ∪ `m`, without provenance.
    pub fn unsat_concepts(&self, m: &Alignment) -> Result<BTreeSet<Iri>> {
        m.check_endpoints(self.kg1, self.kg2)?;
        let mut g = self.base.clone();
        let empty = Support::empty();
        for mapping in m {
            for ax in mapping.translate() {
                g.add_axiom(&ax, &empty);
            }
        }
        Ok(plain_unsat(&g))
    }
}

/// Reachability-only unsatisfiability check.
fn plain_unsat(g: &SupportGraph) -> BTreeSet<Iri> {
    let n = g.nodes.len();
    let mut out = BTreeSet::new();
    let mut seen = vec![usize::MAX; n];
    let mut stack = Vec::new();
    for start in 0..n {
        let mut reached = Vec::new();
        stack.push(start);
        seen[start] = start;
        while let Some(b) = stack.pop() {
            reached.push(b);
            for (c, _) in &g.edges[b] {
                if seen[*c] != start {
                    seen[*c] = start;
                    stack.push(*c);
                }
            }
        }
        let hit = reached.iter().any(|&x| g.disjoint[x].iter().any(|&y| seen[y] == start));
        if hit {
            out.insert(g.nodes[start].clone());
        }
    }
    out
}

/// Closure of KG1 ∪ KG2 ∪ `m` with the default support cap.
pub fn closure(kg1: &KnowledgeGraph, kg2: &KnowledgeGraph, m: &Alignment) -> Result<ClosureResult> {
    Reasoner::new(kg1, kg2).closure(m)
}

/// Whether the mapping belongs to some minimal justification of an
/// unsatisfiable concept.
pub fn involved(key: &MappingKey, cr: &ClosureResult) -> Result<bool> {
    if !cr.key_index.contains_key(key) {
        return Err(Error::Contract(format!("mapping {key} is not part of the closed alignment")));
    }
    Ok(cr.involved.contains(key))
}

/// 0 when some mapping of `e` is involved in an unsatisfiability, else 1.
pub fn consist(e: &Iri, m: &Alignment, cr: &ClosureResult) -> u8 {
    u8::from(!m.touching(e).any(|mp| cr.involved.contains(&mp.key())))
}

/// Number of unsatisfiable concepts whose justifications involve a mapping
/// of `e`.
pub fn unsat_count(e: &Iri, m: &Alignment, cr: &ClosureResult) -> usize {
    let touching: BTreeSet<MappingKey> = m.touching(e).map(|mp| mp.key()).collect();
    if touching.is_empty() {
        return 0;
    }
    cr.unsat.iter().filter(|r| !r.involved_mappings.is_disjoint(&touching)).count()
}

/// Graded consistency `2 / (1 + e^bot)`: 1 with no unsatisfiability, strictly
/// decreasing, tending to 0.
pub fn softconsist(bot: usize) -> f64 {
    2.0 / (1.0 + (bot as f64).exp())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomicStatement {
    Subsumption { sub: Iri, sup: Iri },
    Unsatisfiable(Iri),
}

impl fmt::Display for AtomicStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomicStatement::Subsumption { sub, sup } => write!(f, "{sub} ⊑ {sup}"),
            AtomicStatement::Unsatisfiable(a) => write!(f, "{a} ⊑ ⊥"),
        }
    }
}

fn atomic_consequences(axioms: &[Axiom], sigma: &BTreeSet<Iri>) -> BTreeSet<AtomicStatement> {
    let mut g = SupportGraph::new(sigma.iter().cloned());
    let empty = Support::empty();
    for ax in axioms {
        g.add_axiom(ax, &empty);
    }
    let raw = saturate(&g, 1);
    let mut out = BTreeSet::new();
    for (a, row) in raw.ancestors.iter().enumerate() {
        if !sigma.contains(&g.nodes[a]) {
            continue;
        }
        for (b, _) in row {
            if *b != a && sigma.contains(&g.nodes[*b]) {
                out.insert(AtomicStatement::Subsumption { sub: g.nodes[a].clone(), sup: g.nodes[*b].clone() });
            }
        }
    }
    for (a, _) in raw.unsat {
        if sigma.contains(&g.nodes[a]) {
            out.insert(AtomicStatement::Unsatisfiable(g.nodes[a].clone()));
        }
    }
    out
}

/// Atomic statements over `sigma` that follow from `b` but not from `a`.
pub fn deductive_diff(a: &[Axiom], b: &[Axiom], sigma: &BTreeSet<Iri>) -> BTreeSet<AtomicStatement> {
    let ca = atomic_consequences(a, sigma);
    let cb = atomic_consequences(b, sigma);
    cb.difference(&ca).cloned().collect()
}

/// KG∅ = KG1 ∪ KG2 and KG_M as plain axiom lists, for use with
/// [`deductive_diff`].
pub fn base_and_aligned_axioms(
    kg1: &KnowledgeGraph,
    kg2: &KnowledgeGraph,
    m: &Alignment,
) -> Result<(Vec<Axiom>, Vec<Axiom>)> {
    let base: Vec<Axiom> = kg1.axioms().iter().chain(kg2.axioms()).cloned().collect();
    let aligned = aligned_axioms(kg1, kg2, m)?.into_iter().map(|a| a.axiom).collect();
    Ok((base, aligned))
}
