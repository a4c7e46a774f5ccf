//! Independent reference implementations used by the integration tests.
//! None of these share code with the library beyond its data types.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use kgalign::benchgen::SplitMix64;
use kgalign::lexical::normalize;
use kgalign::{Alignment, Axiom, Entity, Iri, KnowledgeGraph, Mapping, MappingKey, Relation};

// ---------------------------------------------------------------- reasoning

/// Plain reachability over KG1 ∪ KG2 plus a chosen set of mappings,
/// computed by iterating `reach[a] ⊇ reach[b]` along every edge until
/// nothing changes.
pub struct Fixpoint {
    pub nodes: Vec<Iri>,
    pub reach: Vec<Vec<bool>>,
    disjoint: Vec<(usize, usize)>,
}

impl Fixpoint {
    pub fn new(kg1: &KnowledgeGraph, kg2: &KnowledgeGraph, mappings: &[&Mapping]) -> Self {
        let nodes: Vec<Iri> = kg1
            .signature()
            .classes
            .iter()
            .chain(kg2.signature().classes.iter())
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let idx: BTreeMap<&Iri, usize> = nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
        let mut edges = Vec::new();
        let mut disjoint = Vec::new();
        for ax in kg1.axioms().iter().chain(kg2.axioms()) {
            match ax {
                Axiom::SubClassOf { sub, sup } => edges.push((idx[sub], idx[sup])),
                Axiom::EquivalentClass { a, b } => {
                    edges.push((idx[a], idx[b]));
                    edges.push((idx[b], idx[a]));
                }
                Axiom::DisjointWith { a, b } => disjoint.push((idx[a], idx[b])),
            }
        }
        for m in mappings {
            let (s, t) = (idx[&m.source], idx[&m.target]);
            match m.relation {
                Relation::Equivalent => {
                    edges.push((s, t));
                    edges.push((t, s));
                }
                Relation::Subsumed => edges.push((s, t)),
                Relation::Subsumes => edges.push((t, s)),
            }
        }
        let n = nodes.len();
        let mut reach: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for &(a, b) in &edges {
                let from = reach[b].clone();
                for (dst, &src) in reach[a].iter_mut().zip(&from) {
                    if src && !*dst {
                        *dst = true;
                        changed = true;
                    }
                }
            }
        }
        Fixpoint { nodes, reach, disjoint }
    }

    pub fn pairs(&self) -> BTreeSet<(Iri, Iri)> {
        let mut out = BTreeSet::new();
        for (i, row) in self.reach.iter().enumerate() {
            for (j, &r) in row.iter().enumerate() {
                if r {
                    out.insert((self.nodes[i].clone(), self.nodes[j].clone()));
                }
            }
        }
        out
    }

    pub fn unsat(&self) -> BTreeSet<Iri> {
        (0..self.nodes.len())
            .filter(|&a| self.disjoint.iter().any(|&(x, y)| self.reach[a][x] && self.reach[a][y]))
            .map(|a| self.nodes[a].clone())
            .collect()
    }
}

pub fn subset(mappings: &[Mapping], mask: u32) -> Vec<&Mapping> {
    mappings.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, m)| m).collect()
}

/// Minimal mapping subsets making each concept unsatisfiable, by
/// enumerating every subset.
pub fn minimal_justifications(
    kg1: &KnowledgeGraph,
    kg2: &KnowledgeGraph,
    mappings: &[Mapping],
) -> BTreeMap<Iri, BTreeSet<BTreeSet<MappingKey>>> {
    let n = mappings.len();
    assert!(n <= 16);
    let unsat: Vec<BTreeSet<Iri>> =
        (0..1u32 << n).map(|mask| Fixpoint::new(kg1, kg2, &subset(mappings, mask)).unsat()).collect();
    let mut out: BTreeMap<Iri, BTreeSet<BTreeSet<MappingKey>>> = BTreeMap::new();
    for mask in 0..1u32 << n {
        for a in &unsat[mask as usize] {
            let minimal =
                (0..n).filter(|i| mask >> i & 1 == 1).all(|i| !unsat[(mask & !(1 << i)) as usize].contains(a));
            if minimal {
                let keys = subset(mappings, mask).iter().map(|m| m.key()).collect();
                out.entry(a.clone()).or_default().insert(keys);
            }
        }
    }
    out
}

pub fn involved_oracle(kg1: &KnowledgeGraph, kg2: &KnowledgeGraph, mappings: &[Mapping]) -> BTreeSet<MappingKey> {
    minimal_justifications(kg1, kg2, mappings).into_values().flatten().flatten().collect()
}

/// Best summed confidence over subsets that respect two-sided cardinality
/// `t` and add no unsatisfiable concept.
pub fn brute_force_optimum(kg1: &KnowledgeGraph, kg2: &KnowledgeGraph, mappings: &[Mapping], t: usize) -> f64 {
    let n = mappings.len();
    assert!(n <= 16);
    let baseline = Fixpoint::new(kg1, kg2, &[]).unsat();
    let mut best = 0.0f64;
    for mask in 0..1u32 << n {
        let chosen = subset(mappings, mask);
        if !cardinality_ok(chosen.iter().copied(), t) {
            continue;
        }
        let value: f64 = chosen.iter().map(|m| m.confidence()).sum();
        if value <= best {
            continue;
        }
        if Fixpoint::new(kg1, kg2, &chosen).unsat() == baseline {
            best = value;
        }
    }
    best
}

pub fn cardinality_ok<'a>(ms: impl IntoIterator<Item = &'a Mapping>, t: usize) -> bool {
    let mut s: BTreeMap<&Iri, usize> = BTreeMap::new();
    let mut d: BTreeMap<&Iri, usize> = BTreeMap::new();
    for m in ms {
        *s.entry(&m.source).or_default() += 1;
        *d.entry(&m.target).or_default() += 1;
    }
    s.values().chain(d.values()).all(|&c| c <= t)
}

// ------------------------------------------------------------------ strings

pub fn levenshtein_ref(a: &str, b: &str) -> f64 {
    strsim::normalized_levenshtein(a, b)
}

/// Winkler's prefix boost applied unconditionally; `strsim` only boosts
/// above a Jaro score of 0.7.
pub fn jaro_winkler_ref(a: &str, b: &str) -> f64 {
    let j = strsim::jaro(a, b);
    let l = a.chars().zip(b.chars()).take(4).take_while(|(x, y)| x == y).count();
    (j + 0.1 * l as f64 * (1.0 - j)).min(1.0)
}

pub fn jaccard_ref(a: &str, b: &str) -> f64 {
    let ta: HashSet<String> = normalize(a).tokens.into_iter().collect();
    let tb: HashSet<String> = normalize(b).tokens.into_iter().collect();
    if ta.is_empty() && tb.is_empty() {
        return 1.0;
    }
    ta.intersection(&tb).count() as f64 / ta.union(&tb).count() as f64
}

pub fn combined_ref(a: &str, b: &str) -> f64 {
    let (na, nb) = (normalize(a), normalize(b));
    levenshtein_ref(&na.joined, &nb.joined).max(jaro_winkler_ref(&na.joined, &nb.joined)).max(jaccard_ref(a, b))
}

fn tokens_of(e: &Entity) -> HashSet<String> {
    e.labels().iter().flat_map(|l| normalize(&l.text).tokens).collect()
}

/// Every same-kind pair scored with the reference metrics, optionally
/// restricted to pairs sharing a normalized token.
pub fn exhaustive_candidates(
    kg1: &KnowledgeGraph,
    kg2: &KnowledgeGraph,
    threshold: f64,
    shared_token: bool,
) -> BTreeMap<MappingKey, f64> {
    let mut out = BTreeMap::new();
    for e1 in kg1.entities() {
        for e2 in kg2.entities() {
            if e1.kind != e2.kind {
                continue;
            }
            if shared_token && tokens_of(e1).is_disjoint(&tokens_of(e2)) {
                continue;
            }
            let mut best = 0.0f64;
            for l1 in e1.labels() {
                for l2 in e2.labels() {
                    best = best.max(combined_ref(&l1.text, &l2.text));
                }
            }
            if best >= threshold {
                out.insert(MappingKey::new(e1.iri.clone(), e2.iri.clone(), Relation::Equivalent), best);
            }
        }
    }
    out
}

const ALPHABET: &[char] = &['a', 'b', 'c', 'd', 'e', 'r', 's', 't', 'A', 'B', 'T', ' ', '_', '-', 'é', 'ß'];

pub fn random_string(rng: &mut SplitMix64, max_len: usize) -> String {
    let len = rng.below(max_len + 1);
    (0..len).map(|_| ALPHABET[rng.below(ALPHABET.len())]).collect()
}

// ---------------------------------------------------------------- instances

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub classes1: usize,
    pub classes2: usize,
    pub subclass_axioms: usize,
    pub disjoint_axioms: usize,
    pub mappings: usize,
    /// Subclass edges only point from lower to higher index.
    pub dag: bool,
}

pub struct Instance {
    pub kg1: KnowledgeGraph,
    pub kg2: KnowledgeGraph,
    pub mappings: Vec<Mapping>,
}

impl Instance {
    pub fn alignment(&self) -> Alignment {
        Alignment::from_mappings(self.mappings.iter().cloned()).unwrap()
    }
}

pub fn class_iri(side: &str, i: usize) -> Iri {
    Iri::new(format!("http://example.org/{side}#C{i}")).unwrap()
}

fn random_graph(
    rng: &mut SplitMix64,
    side: &str,
    n: usize,
    subclass: usize,
    disjoint: usize,
    dag: bool,
) -> KnowledgeGraph {
    let mut b = KnowledgeGraph::builder(side);
    for i in 0..n {
        b.class(class_iri(side, i), []).unwrap();
    }
    if n >= 2 {
        for _ in 0..subclass {
            let (mut x, mut y) = (rng.below(n), rng.below(n));
            if x == y {
                continue;
            }
            if dag && x > y {
                std::mem::swap(&mut x, &mut y);
            }
            b.axiom(Axiom::subclass(class_iri(side, x), class_iri(side, y)));
        }
        for _ in 0..disjoint {
            let (x, y) = (rng.below(n), rng.below(n));
            if x != y {
                b.axiom(Axiom::disjoint(class_iri(side, x), class_iri(side, y)));
            }
        }
    }
    b.build().unwrap()
}

pub fn random_instance(rng: &mut SplitMix64, shape: &Shape) -> Instance {
    // disjointness in the target only, so the union starts coherent more
    // often, as in the usual repair setting
    let kg1 = random_graph(rng, "a", shape.classes1, shape.subclass_axioms / 2, 0, shape.dag);
    let kg2 = random_graph(
        rng,
        "b",
        shape.classes2,
        shape.subclass_axioms - shape.subclass_axioms / 2,
        shape.disjoint_axioms,
        shape.dag,
    );
    let mut seen = BTreeSet::new();
    let mut mappings = Vec::new();
    for _ in 0..shape.mappings {
        let (s, t) = (rng.below(shape.classes1), rng.below(shape.classes2));
        let relation =
            [Relation::Equivalent, Relation::Equivalent, Relation::Subsumed, Relation::Subsumes][rng.below(4)];
        if !seen.insert((s, t, relation)) {
            continue;
        }
        let c = (1 + rng.below(100)) as f64 / 100.0;
        mappings.push(Mapping::new(class_iri("a", s), class_iri("b", t), relation, c).unwrap());
    }
    Instance { kg1, kg2, mappings }
}
