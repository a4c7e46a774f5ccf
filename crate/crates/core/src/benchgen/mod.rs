//! Seeded synthetic benchmark: a random taxonomy, a perturbed copy under
//! fresh IRIs, the counterpart alignment as ground truth, and planted
//! conflicts in which two correct mappings are jointly unsatisfiable.
//!
//! A planted conflict takes a leaf `c` with parent `p`. In the target copy
//! `c'` is moved from under `p'` to a new target-only top class `q`, and
//! `p'` is declared disjoint with `q`. Both `c ≡ c'` and `p ≡ p'` are in the
//! ground truth, yet together they make `c` and `c'` unsatisfiable.

mod rng;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

pub use rng::SplitMix64;

use crate::alignment::{Alignment, Mapping, MappingKey};
use crate::error::{Error, Result};
use crate::ingest::{serialize_ontology, write_alignment};
use crate::model::{Axiom, Iri, KnowledgeGraph, Label};

pub const WORDS: &str = include_str!("../../data/words.txt");
pub const SYNONYMS: &str = include_str!("../../data/synonyms.tsv");

pub const SOURCE_NS: &str = "http://example.org/bench/source#";
pub const TARGET_NS: &str = "http://example.org/bench/target#";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchConfig {
    pub seed: u64,
    pub n_classes: usize,
    /// Maximum children per class.
    pub branching: usize,
    pub label_noise: f64,
    pub edge_delete_rate: f64,
    pub n_conflicts: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { seed: 42, n_classes: 200, branching: 4, label_noise: 0.1, edge_delete_rate: 0.05, n_conflicts: 5 }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_classes == 0 {
            return Err(Error::Config("n_classes must be positive".into()));
        }
        if self.branching == 0 {
            return Err(Error::Config("branching must be positive".into()));
        }
        for (name, v) in [("label_noise", self.label_noise), ("edge_delete_rate", self.edge_delete_rate)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} {v} outside [0, 1]")));
            }
        }
        if self.n_conflicts > self.n_classes / 4 {
            return Err(Error::Config(format!(
                "n_conflicts {} exceeds n_classes / 4 = {}",
                self.n_conflicts,
                self.n_classes / 4
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Benchmark {
    pub config: BenchConfig,
    pub source: KnowledgeGraph,
    pub target: KnowledgeGraph,
    pub ground_truth: Alignment,
    /// Ground-truth keys taking part in planted conflicts, sorted.
    pub conflicts: Vec<MappingKey>,
}

fn word_list() -> Vec<&'static str> {
    WORDS.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect()
}

fn synonym_table() -> BTreeMap<&'static str, &'static str> {
    SYNONYMS
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .filter_map(|l| l.split_once('\t'))
        .map(|(a, b)| (a.trim(), b.trim()))
        .collect()
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// `n` distinct labels: shuffled single words first, then two-word
/// combinations in shuffled-index order.
fn draw_labels(rng: &mut SplitMix64, n: usize) -> Result<Vec<String>> {
    let mut words = word_list();
    rng.shuffle(&mut words);
    let w = words.len();
    if n > w * w {
        return Err(Error::Config(format!("cannot draw {n} distinct labels from {w} words")));
    }
    let mut out: Vec<String> = words.iter().take(n).map(|x| capitalize(x)).collect();
    'outer: for i in 0..w {
        for j in 0..w {
            if out.len() >= n {
                break 'outer;
            }
            if i != j {
                out.push(format!("{} {}", capitalize(words[i]), capitalize(words[j])));
            }
        }
    }
    Ok(out)
}

/// Parent of each node (`None` for the root) in a random recursive tree
/// where no node exceeds `branching` children.
fn random_tree(rng: &mut SplitMix64, n: usize, branching: usize) -> Vec<Option<usize>> {
    let mut parent = vec![None; n];
    let mut children = vec![0usize; n];
    let mut open = vec![0usize];
    for (i, slot) in parent.iter_mut().enumerate().skip(1) {
        let k = rng.below(open.len());
        let p = open[k];
        *slot = Some(p);
        children[p] += 1;
        if children[p] == branching {
            open.swap_remove(k);
        }
        open.push(i);
    }
    parent
}

fn swap_adjacent(rng: &mut SplitMix64, label: &str) -> String {
    let mut chars: Vec<char> = label.chars().collect();
    let spots: Vec<usize> = (0..chars.len().saturating_sub(1))
        .filter(|&i| chars[i].is_alphabetic() && chars[i + 1].is_alphabetic() && chars[i] != chars[i + 1])
        .collect();
    if spots.is_empty() {
        return label.to_string();
    }
    let i = spots[rng.below(spots.len())];
    chars.swap(i, i + 1);
    chars.into_iter().collect()
}

/// Adjacent-character swap, synonym substitution or token reorder, chosen
/// uniformly. Inapplicable kinds fall back to the swap.
fn perturb(rng: &mut SplitMix64, label: &str, synonyms: &BTreeMap<&str, &str>) -> String {
    let tokens: Vec<&str> = label.split(' ').collect();
    match rng.below(3) {
        1 => {
            let hits: Vec<usize> =
                (0..tokens.len()).filter(|&i| synonyms.contains_key(tokens[i].to_lowercase().as_str())).collect();
            if hits.is_empty() {
                return swap_adjacent(rng, label);
            }
            let i = hits[rng.below(hits.len())];
            let mut out: Vec<String> = tokens.iter().map(|t| t.to_string()).collect();
            out[i] = capitalize(synonyms[tokens[i].to_lowercase().as_str()]);
            out.join(" ")
        }
        2 if tokens.len() > 1 => {
            let mut out = tokens.clone();
            out.rotate_left(1);
            out.join(" ")
        }
        _ => swap_adjacent(rng, label),
    }
}

fn iri(ns: &str, local: String) -> Iri {
    Iri::new(format!("{ns}{local}")).expect("generated IRIs are valid")
}

pub fn generate(cfg: &BenchConfig) -> Result<Benchmark> {
    cfg.validate()?;
    let n = cfg.n_classes;
    let mut rng = SplitMix64::new(cfg.seed);
    let synonyms = synonym_table();

    let labels = draw_labels(&mut rng, n + cfg.n_conflicts)?;
    let parent = random_tree(&mut rng, n, cfg.branching);
    let mut perm: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut perm);

    let has_children: BTreeSet<usize> = parent.iter().flatten().copied().collect();
    let mut leaves: Vec<usize> = (1..n).filter(|i| !has_children.contains(i)).collect();
    if leaves.len() < cfg.n_conflicts {
        return Err(Error::Config(format!(
            "taxonomy has {} leaves, fewer than {} conflicts",
            leaves.len(),
            cfg.n_conflicts
        )));
    }
    rng.shuffle(&mut leaves);
    let mut conflict_leaves: Vec<usize> = leaves[..cfg.n_conflicts].to_vec();
    conflict_leaves.sort_unstable();
    let in_conflict: BTreeSet<usize> =
        conflict_leaves.iter().flat_map(|&c| [c, parent[c].expect("leaves are not the root")]).collect();

    let src = |i: usize| iri(SOURCE_NS, format!("C{i:05}"));
    let tgt = |i: usize| iri(TARGET_NS, format!("T{:05}", perm[i]));
    let extra = |k: usize| iri(TARGET_NS, format!("X{k:05}"));

    let mut b1 = KnowledgeGraph::builder("source");
    for (i, label) in labels.iter().enumerate().take(n) {
        b1.class(src(i), [Label::new(label.clone())])?;
    }
    for (i, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            b1.axiom(Axiom::subclass(src(i), src(*p)));
        }
    }

    let mut b2 = KnowledgeGraph::builder("target");
    for (i, label) in labels.iter().enumerate().take(n) {
        // conflict classes keep clean labels so both of their mappings reach
        // the candidate set
        let text = if !in_conflict.contains(&i) && rng.chance(cfg.label_noise) {
            perturb(&mut rng, label, &synonyms)
        } else {
            label.clone()
        };
        b2.class(tgt(i), [Label::new(text)])?;
    }
    let moved: BTreeSet<usize> = conflict_leaves.iter().copied().collect();
    for (i, p) in parent.iter().enumerate() {
        let Some(p) = p else { continue };
        if moved.contains(&i) || rng.chance(cfg.edge_delete_rate) {
            continue;
        }
        b2.axiom(Axiom::subclass(tgt(i), tgt(*p)));
    }
    let mut conflicts = BTreeSet::new();
    for (k, &c) in conflict_leaves.iter().enumerate() {
        let p = parent[c].expect("leaves are not the root");
        b2.class(extra(k), [Label::new(labels[n + k].clone())])?;
        b2.axiom(Axiom::subclass(tgt(c), extra(k)));
        b2.axiom(Axiom::disjoint(tgt(p), extra(k)));
        conflicts.insert(Mapping::equivalence(src(c), tgt(c), 1.0)?.key());
        conflicts.insert(Mapping::equivalence(src(p), tgt(p), 1.0)?.key());
    }

    let ground_truth =
        Alignment::from_mappings((0..n).map(|i| Mapping::equivalence(src(i), tgt(i), 1.0).expect("valid")))?;
    Ok(Benchmark {
        config: *cfg,
        source: b1.build()?,
        target: b2.build()?,
        ground_truth,
        conflicts: conflicts.into_iter().collect(),
    })
}

impl Benchmark {
    pub fn manifest(&self) -> String {
        let mut out = String::from("# conflict mappings: source\ttarget\trelation\n");
        for k in &self.conflicts {
            out.push_str(&format!("{}\t{}\t{}\n", k.source, k.target, k.relation.symbol()));
        }
        out
    }

    /// File name and contents of each output file, in a fixed order.
    pub fn files(&self) -> Vec<(&'static str, String)> {
        vec![
            ("source.ttl", serialize_ontology(&self.source)),
            ("target.ttl", serialize_ontology(&self.target)),
            ("reference.tsv", write_alignment(&self.ground_truth, None)),
            ("manifest.tsv", self.manifest()),
        ]
    }

    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (name, body) in self.files() {
            fs::write(dir.join(name), body)?;
        }
        Ok(())
    }
}

/// Parses the keys written by [`Benchmark::manifest`].
pub fn read_manifest(text: &str) -> Result<Vec<MappingKey>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let rel = cols.get(2).and_then(|r| crate::alignment::Relation::from_symbol(r));
        match (cols.as_slice(), rel) {
            ([s, t, _], Some(r)) => out.push(MappingKey::new(Iri::new(*s)?, Iri::new(*t)?, r)),
            _ => return Err(Error::Config(format!("manifest line {}: expected source, target, relation", i + 1))),
        }
    }
    Ok(out)
}
