//! Greedy mapping selection under the correctness assumption (hard), the
//! confidence-threshold heuristic, and graded soft consistency.
//!
//! All modes walk candidates in the same order: confidence descending, then
//! source, target and relation ascending. Cardinality is two-sided: neither
//! endpoint of an accepted mapping may already have `t` accepted mappings.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::alignment::{Alignment, Mapping, MappingKey};
use crate::error::{Error, Result};
use crate::model::{Iri, KnowledgeGraph};
use crate::reasoner::{consist, softconsist, unsat_count, ClosureResult, Reasoner, UnsatReport, DEFAULT_J_CAP};

/// Largest candidate set accepted by [`select_exact`].
pub const EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Hard,
    Threshold,
    Soft,
    None,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hard" => Ok(Mode::Hard),
            "threshold" => Ok(Mode::Threshold),
            "soft" => Ok(Mode::Soft),
            "none" => Ok(Mode::None),
            other => Err(Error::Config(format!("unknown mode '{other}'"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Hard => "hard",
            Mode::Threshold => "threshold",
            Mode::Soft => "soft",
            Mode::None => "none",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectorConfig {
    pub mode: Mode,
    /// Threshold mode: mappings at or above this confidence skip the
    /// consistency check.
    pub theta: f64,
    pub cardinality_t: usize,
    /// Soft mode: accepted mappings scoring below this are removed.
    pub gamma: f64,
    pub max_soft_iterations: usize,
    pub j_cap: usize,
}

impl Default for SelectorConfig {
    fn default() -> Self {
        SelectorConfig {
            mode: Mode::Hard,
            theta: 0.7,
            cardinality_t: 1,
            gamma: 0.0,
            max_soft_iterations: 10,
            j_cap: DEFAULT_J_CAP,
        }
    }
}

impl SelectorConfig {
    pub fn with_mode(mode: Mode) -> Self {
        SelectorConfig { mode, ..Self::default() }
    }

    /// `theta` may exceed 1, which empties the exemption set.
    pub fn validate(&self) -> Result<()> {
        if !(self.theta.is_finite() && self.theta >= 0.0) {
            return Err(Error::Config(format!("theta {} must be a finite non-negative number", self.theta)));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Config(format!("gamma {} outside [0, 1]", self.gamma)));
        }
        if self.cardinality_t == 0 {
            return Err(Error::Config("cardinality must be at least 1".into()));
        }
        if self.max_soft_iterations == 0 {
            return Err(Error::Config("max soft iterations must be at least 1".into()));
        }
        if self.j_cap == 0 {
            return Err(Error::Config("justification cap must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Accepted,
    RejectedCardinality,
    RejectedInconsistent,
    /// Zero confidence, or removed by the soft-mode floor.
    RejectedFloor,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Accepted => "accepted",
            Status::RejectedCardinality => "rejected-cardinality",
            Status::RejectedInconsistent => "rejected-inconsistent",
            Status::RejectedFloor => "rejected-floor",
        })
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accepted" => Ok(Status::Accepted),
            "rejected-cardinality" => Ok(Status::RejectedCardinality),
            "rejected-inconsistent" => Ok(Status::RejectedInconsistent),
            "rejected-floor" => Ok(Status::RejectedFloor),
            other => Err(Error::Config(format!("unknown status '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredMapping {
    pub mapping: Mapping,
    pub objective_score: f64,
    pub status: Status,
    /// For inconsistency rejections, the justifications (including this
    /// mapping) that accepting it would have produced.
    pub conflicts: Vec<BTreeSet<MappingKey>>,
}

impl ScoredMapping {
    fn new(mapping: Mapping, objective_score: f64, status: Status) -> Self {
        ScoredMapping { mapping, objective_score, status, conflicts: Vec::new() }
    }
}

#[derive(Debug, Clone)]
pub struct Selection {
    pub alignment: Alignment,
    /// One record per candidate, in greedy order.
    pub scored: Vec<ScoredMapping>,
    /// Unsatisfiable concepts of the final aligned graph.
    pub unsat: Vec<UnsatReport>,
    pub truncated: bool,
    /// Soft mode stopped at the iteration cap with sub-floor mappings left.
    pub hit_iteration_cap: bool,
    pub soft_iterations: usize,
}

impl Selection {
    pub fn objective_value(&self) -> f64 {
        objective_value(&self.scored)
    }

    pub fn flagged(&self) -> bool {
        self.truncated || self.hit_iteration_cap
    }
}

/// Sum of scores over accepted mappings.
pub fn objective_value(scored: &[ScoredMapping]) -> f64 {
    scored.iter().filter(|s| s.status == Status::Accepted).map(|s| s.objective_score).sum()
}

pub fn greedy_order(a: &Mapping, b: &Mapping) -> Ordering {
    b.confidence().total_cmp(&a.confidence()).then_with(|| a.key().cmp(&b.key()))
}

fn ordered(candidates: &Alignment) -> Vec<Mapping> {
    let mut v: Vec<Mapping> = candidates.iter().cloned().collect();
    v.sort_by(greedy_order);
    v
}

#[derive(Default)]
struct Degrees {
    source: BTreeMap<Iri, usize>,
    target: BTreeMap<Iri, usize>,
}

impl Degrees {
    fn admits(&self, m: &Mapping, t: usize) -> bool {
        self.source.get(&m.source).copied().unwrap_or(0) < t && self.target.get(&m.target).copied().unwrap_or(0) < t
    }

    fn add(&mut self, m: &Mapping) {
        *self.source.entry(m.source.clone()).or_default() += 1;
        *self.target.entry(m.target.clone()).or_default() += 1;
    }
}

/// Dispatches on `cfg.mode`.
pub fn select(
    kg1: &KnowledgeGraph,
    kg2: &KnowledgeGraph,
    candidates: &Alignment,
    cfg: &SelectorConfig,
) -> Result<Selection> {
    match cfg.mode {
        Mode::Hard => select_hard(kg1, kg2, candidates, cfg),
        Mode::Threshold => select_threshold(kg1, kg2, candidates, cfg),
        Mode::Soft => select_soft(kg1, kg2, candidates, cfg),
        Mode::None => select_none(kg1, kg2, candidates, cfg),
    }
}

fn prepare<'a>(
    kg1: &'a KnowledgeGraph,
    kg2: &'a KnowledgeGraph,
    candidates: &Alignment,
    cfg: &SelectorConfig,
) -> Result<Reasoner<'a>> {
    cfg.validate()?;
    candidates.check_endpoints(kg1, kg2)?;
    Ok(Reasoner::new(kg1, kg2).with_j_cap(cfg.j_cap))
}

fn finish(r: &Reasoner, alignment: Alignment, scored: Vec<ScoredMapping>, truncated: bool) -> Result<Selection> {
    let cr = r.closure(&alignment)?;
    Ok(Selection {
        unsat: cr.unsat().to_vec(),
        truncated: truncated || cr.truncated(),
        alignment,
        scored,
        hit_iteration_cap: false,
        soft_iterations: 0,
    })
}

/// Justifications of `with` that contain `key`, deduplicated.
fn conflicts_of(cr: &ClosureResult, key: &MappingKey) -> Vec<BTreeSet<MappingKey>> {
    let set: BTreeSet<BTreeSet<MappingKey>> =
        cr.unsat().iter().flat_map(|u| u.justifications.iter()).filter(|j| j.contains(key)).cloned().collect();
    set.into_iter().collect()
}

/// Greedy walk shared by hard and threshold modes. `exempt` decides which
/// mappings skip the consistency check.
fn greedy_consistent(
    r: &Reasoner,
    candidates: &Alignment,
    cfg: &SelectorConfig,
    exempt: impl Fn(&Mapping) -> bool,
) -> Result<Selection> {
    let mut accepted = Alignment::new();
    let mut unsat = r.unsat_concepts(&accepted)?;
    let mut degrees = Degrees::default();
    let mut scored = Vec::with_capacity(candidates.len());
    let mut truncated = false;

    for m in ordered(candidates) {
        if m.confidence() == 0.0 {
            scored.push(ScoredMapping::new(m, 0.0, Status::RejectedFloor));
            continue;
        }
        if !degrees.admits(&m, cfg.cardinality_t) {
            scored.push(ScoredMapping::new(m, 0.0, Status::RejectedCardinality));
            continue;
        }
        let mut with = accepted.clone();
        with.insert(m.clone())?;
        let with_unsat = r.unsat_concepts(&with)?;
        if exempt(&m) {
            log::trace!("{} exempt at confidence {}", m.key(), m.confidence());
        } else {
            // consist(e1)·consist(e2) = 0 exactly when the mapping takes part
            // in some justification; new unsat concepts always implicate it.
            let involved = if with_unsat.len() > unsat.len() {
                true
            } else if unsat.is_empty() {
                false
            } else {
                let cr = r.closure(&with)?;
                truncated |= cr.truncated();
                consist(&m.source, &with, &cr) == 0 || consist(&m.target, &with, &cr) == 0
            };
            if involved {
                let cr = r.closure(&with)?;
                truncated |= cr.truncated();
                let mut s = ScoredMapping::new(m.clone(), 0.0, Status::RejectedInconsistent);
                s.conflicts = conflicts_of(&cr, &m.key());
                log::debug!("rejected {} ({} conflicts)", m.key(), s.conflicts.len());
                scored.push(s);
                continue;
            }
        }
        degrees.add(&m);
        scored.push(ScoredMapping::new(m.clone(), m.confidence(), Status::Accepted));
        accepted = with;
        unsat = with_unsat;
    }
    finish(r, accepted, scored, truncated)
}

/// Correctness assumption: keep the aligned graph free of new
/// unsatisfiable concepts.
pub fn select_hard(
    kg1: &KnowledgeGraph,
    kg2: &KnowledgeGraph,
    candidates: &Alignment,
    cfg: &SelectorConfig,
) -> Result<Selection> {
    let r = prepare(kg1, kg2, candidates, cfg)?;
    greedy_consistent(&r, candidates, cfg, |_| false)
}

/// Mappings with confidence at least `theta` are trusted outright; the rest
/// are accepted only when they are not involved in an unsatisfiability.
pub fn select_threshold(
    kg1: &KnowledgeGraph,
    kg2: &KnowledgeGraph,
    candidates: &Alignment,
    cfg: &SelectorConfig,
) -> Result<Selection> {
    let r = prepare(kg1, kg2, candidates, cfg)?;
    let theta = cfg.theta;
    greedy_consistent(&r, candidates, cfg, |m| m.confidence() >= theta)
}

fn cardinality_only(candidates: &Alignment, t: usize) -> (Alignment, Vec<ScoredMapping>) {
    let mut accepted = Alignment::new();
    let mut degrees = Degrees::default();
    let mut scored = Vec::with_capacity(candidates.len());
    for m in ordered(candidates) {
        if !degrees.admits(&m, t) {
            scored.push(ScoredMapping::new(m, 0.0, Status::RejectedCardinality));
            continue;
        }
        degrees.add(&m);
        accepted.insert(m.clone()).expect("keys come from an alignment");
        scored.push(ScoredMapping::new(m.clone(), m.confidence(), Status::Accepted));
    }
    (accepted, scored)
}

/// Cardinality filter only; every accepted mapping keeps its confidence.
pub fn select_none(
    kg1: &KnowledgeGraph,
    kg2: &KnowledgeGraph,
    candidates: &Alignment,
    cfg: &SelectorConfig,
) -> Result<Selection> {
    let r = prepare(kg1, kg2, candidates, cfg)?;
    let (accepted, scored) = cardinality_only(candidates, cfg.cardinality_t);
    finish(&r, accepted, scored, false)
}

/// `softconsist(⊥(source)) · softconsist(⊥(target)) · c`.
pub fn soft_score(m: &Mapping, alignment: &Alignment, cr: &ClosureResult) -> f64 {
    softconsist(unsat_count(&m.source, alignment, cr))
        * softconsist(unsat_count(&m.target, alignment, cr))
        * m.confidence()
}

/// Keeps every cardinality-feasible mapping, penalized by how many
/// unsatisfiable concepts its endpoints take part in; mappings scoring below
/// `gamma` are removed one at a time, lowest first.
pub fn select_soft(
    kg1: &KnowledgeGraph,
    kg2: &KnowledgeGraph,
    candidates: &Alignment,
    cfg: &SelectorConfig,
) -> Result<Selection> {
    let r = prepare(kg1, kg2, candidates, cfg)?;
    let (mut accepted, mut scored) = cardinality_only(candidates, cfg.cardinality_t);
    let position: BTreeMap<MappingKey, usize> = scored.iter().enumerate().map(|(i, s)| (s.mapping.key(), i)).collect();

    let mut iterations = 0;
    let mut truncated = false;
    let (cr, hit_cap) = loop {
        let cr = r.closure(&accepted)?;
        truncated |= cr.truncated();
        let mut worst: Option<(f64, MappingKey)> = None;
        for m in &accepted {
            let s = soft_score(m, &accepted, &cr);
            scored[position[&m.key()]].objective_score = s;
            if s < cfg.gamma {
                let k = m.key();
                let better = match &worst {
                    None => true,
                    Some((ws, wk)) => s.total_cmp(ws).then_with(|| k.cmp(wk)) == Ordering::Less,
                };
                if better {
                    worst = Some((s, k));
                }
            }
        }
        let Some((_, key)) = worst else { break (cr, false) };
        if iterations == cfg.max_soft_iterations {
            break (cr, true);
        }
        iterations += 1;
        accepted.remove(&key);
        scored[position[&key]].status = Status::RejectedFloor;
        log::debug!("soft iteration {iterations}: removed {key}");
    };

    Ok(Selection {
        alignment: accepted,
        scored,
        unsat: cr.unsat().to_vec(),
        truncated,
        hit_iteration_cap: hit_cap,
        soft_iterations: iterations,
    })
}

/// Optimal hard-mode selection by branch and bound. Maximizes the summed
/// confidence over subsets that respect cardinality and add no unsatisfiable
/// concept. Ties go to the subset found first in greedy order.
pub fn select_exact(
    kg1: &KnowledgeGraph,
    kg2: &KnowledgeGraph,
    candidates: &Alignment,
    cfg: &SelectorConfig,
) -> Result<Selection> {
    let r = prepare(kg1, kg2, candidates, cfg)?;
    if candidates.len() > EXACT_LIMIT {
        return Err(Error::Contract(format!(
            "exact selection supports at most {EXACT_LIMIT} candidates, got {}",
            candidates.len()
        )));
    }
    let order = ordered(candidates);
    let baseline = r.unsat_concepts(&Alignment::new())?.len();
    let mut suffix = vec![0.0; order.len() + 1];
    for i in (0..order.len()).rev() {
        suffix[i] = suffix[i + 1] + order[i].confidence();
    }

    struct Search<'s, 'a> {
        r: &'s Reasoner<'a>,
        order: &'s [Mapping],
        suffix: &'s [f64],
        t: usize,
        baseline: usize,
        best: f64,
        best_set: Vec<usize>,
    }

    impl Search<'_, '_> {
        fn go(
            &mut self,
            i: usize,
            chosen: &mut Vec<usize>,
            value: f64,
            degrees: &mut Degrees,
            current: &Alignment,
        ) -> Result<()> {
            if value + self.suffix[i] <= self.best {
                return Ok(());
            }
            if i == self.order.len() {
                if value > self.best {
                    self.best = value;
                    self.best_set = chosen.clone();
                }
                return Ok(());
            }
            let m = &self.order[i];
            if m.confidence() > 0.0 && degrees.admits(m, self.t) {
                let mut with = current.clone();
                with.insert(m.clone())?;
                if self.r.unsat_concepts(&with)?.len() == self.baseline {
                    let mut d = Degrees { source: degrees.source.clone(), target: degrees.target.clone() };
                    d.add(m);
                    chosen.push(i);
                    self.go(i + 1, chosen, value + m.confidence(), &mut d, &with)?;
                    chosen.pop();
                }
            }
            self.go(i + 1, chosen, value, degrees, current)
        }
    }

    let mut search = Search {
        r: &r,
        order: &order,
        suffix: &suffix,
        t: cfg.cardinality_t,
        baseline,
        best: 0.0,
        best_set: Vec::new(),
    };
    search.go(0, &mut Vec::new(), 0.0, &mut Degrees::default(), &Alignment::new())?;

    let chosen: BTreeSet<usize> = search.best_set.into_iter().collect();
    let mut degrees = Degrees::default();
    for &i in &chosen {
        degrees.add(&order[i]);
    }
    let mut accepted = Alignment::new();
    let mut scored = Vec::with_capacity(order.len());
    for (i, m) in order.into_iter().enumerate() {
        if chosen.contains(&i) {
            accepted.insert(m.clone())?;
            scored.push(ScoredMapping::new(m.clone(), m.confidence(), Status::Accepted));
        } else if m.confidence() == 0.0 {
            scored.push(ScoredMapping::new(m, 0.0, Status::RejectedFloor));
        } else if !degrees.admits(&m, cfg.cardinality_t) {
            scored.push(ScoredMapping::new(m, 0.0, Status::RejectedCardinality));
        } else {
            scored.push(ScoredMapping::new(m, 0.0, Status::RejectedInconsistent));
        }
    }
    finish(&r, accepted, scored, false)
}
