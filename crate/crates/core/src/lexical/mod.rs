//! Lexical candidate generation: label normalization, string metrics, and
//! the generator that proposes ≡ mappings between two graphs.

mod metrics;
mod normalize;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

pub use metrics::{jaccard_sim, jaro_sim, jaro_winkler_sim, levenshtein_distance, levenshtein_sim};
pub use normalize::{normalize, NormalizedName};

use crate::alignment::{Alignment, Mapping};
use crate::error::{Error, Result};
use crate::model::{Entity, KnowledgeGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Levenshtein,
    JaroWinkler,
    Jaccard,
    /// Maximum of the three.
    Combined,
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "levenshtein" => Ok(Metric::Levenshtein),
            "jaro-winkler" | "jarowinkler" | "jaro_winkler" => Ok(Metric::JaroWinkler),
            "jaccard" => Ok(Metric::Jaccard),
            "combined" => Ok(Metric::Combined),
            other => Err(Error::Config(format!("unknown metric '{other}'"))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Levenshtein => "levenshtein",
            Metric::JaroWinkler => "jaro-winkler",
            Metric::Jaccard => "jaccard",
            Metric::Combined => "combined",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Blocking {
    /// Compare every pair of same-kind entities.
    None,
    /// Only compare entities whose labels share a normalized token.
    SharedToken,
}

impl FromStr for Blocking {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Blocking::None),
            "shared-token" | "sharedtoken" | "shared_token" => Ok(Blocking::SharedToken),
            other => Err(Error::Config(format!("unknown blocking '{other}'"))),
        }
    }
}

impl fmt::Display for Blocking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Blocking::None => "none",
            Blocking::SharedToken => "shared-token",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatcherConfig {
    pub metric: Metric,
    pub candidate_threshold: f64,
    pub blocking: Blocking,
}

impl Default for MatcherConfig {
    fn default() -> Self {
        MatcherConfig { metric: Metric::Combined, candidate_threshold: 0.5, blocking: Blocking::SharedToken }
    }
}

impl MatcherConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.candidate_threshold) {
            return Err(Error::Config(format!("candidate threshold {} outside [0, 1]", self.candidate_threshold)));
        }
        Ok(())
    }
}

fn pair_score(a: &NormalizedName, b: &NormalizedName, metric: Metric) -> f64 {
    match metric {
        Metric::Levenshtein => levenshtein_sim(&a.joined, &b.joined),
        Metric::JaroWinkler => jaro_winkler_sim(&a.joined, &b.joined),
        Metric::Jaccard => jaccard_sim(a, b),
        Metric::Combined => {
            levenshtein_sim(&a.joined, &b.joined).max(jaro_winkler_sim(&a.joined, &b.joined)).max(jaccard_sim(a, b))
        }
    }
}

fn normalized_labels(e: &Entity) -> Vec<NormalizedName> {
    e.labels().iter().map(|l| normalize(&l.text)).collect()
}

fn best_score(a: &[NormalizedName], b: &[NormalizedName], metric: Metric) -> f64 {
    a.iter().flat_map(|x| b.iter().map(move |y| pair_score(x, y, metric))).fold(0.0, f64::max)
}

/// Best metric score over all label pairs of two entities of the same kind;
/// 0 when either has no labels.
pub fn entity_similarity(e1: &Entity, e2: &Entity, cfg: &MatcherConfig) -> Result<f64> {
    if e1.kind != e2.kind {
        return Err(Error::Contract(format!("cannot compare {} ({}) with {} ({})", e1.iri, e1.kind, e2.iri, e2.kind)));
    }
    Ok(best_score(&normalized_labels(e1), &normalized_labels(e2), cfg.metric))
}

/// Proposes `source ≡ target` for every same-kind pair (subject to blocking)
/// whose similarity reaches the candidate threshold.
pub fn generate_candidates(kg1: &KnowledgeGraph, kg2: &KnowledgeGraph, cfg: &MatcherConfig) -> Result<Alignment> {
    cfg.validate()?;
    let targets: Vec<(&Entity, Vec<NormalizedName>)> = kg2.entities().map(|e| (e, normalized_labels(e))).collect();

    let mut index: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    if cfg.blocking == Blocking::SharedToken {
        for (i, (_, names)) in targets.iter().enumerate() {
            let toks: BTreeSet<&str> = names.iter().flat_map(|n| n.tokens.iter().map(String::as_str)).collect();
            for t in toks {
                index.entry(t).or_default().push(i);
            }
        }
    }

    let mut out = Alignment::new();
    for source in kg1.entities() {
        let names = normalized_labels(source);
        let pool: Vec<usize> = match cfg.blocking {
            Blocking::None => (0..targets.len()).collect(),
            Blocking::SharedToken => {
                let set: BTreeSet<usize> = names
                    .iter()
                    .flat_map(|n| n.tokens.iter())
                    .filter_map(|t| index.get(t.as_str()))
                    .flatten()
                    .copied()
                    .collect();
                set.into_iter().collect()
            }
        };
        for i in pool {
            let (target, tnames) = &targets[i];
            if target.kind != source.kind {
                continue;
            }
            let sim = best_score(&names, tnames, cfg.metric);
            if sim >= cfg.candidate_threshold {
                out.insert(Mapping::equivalence(source.iri.clone(), target.iri.clone(), sim)?)?;
            }
        }
    }
    log::debug!("generated {} candidates", out.len());
    Ok(out)
}
