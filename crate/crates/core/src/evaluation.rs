//! Comparison against a reference alignment and one-dimensional calibration
//! of the selector.

use std::fmt;

use crate::alignment::{Alignment, MappingKey};
use crate::error::{Error, Result};
use crate::model::KnowledgeGraph;
use crate::selector::{select, Mode, SelectorConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl EvalReport {
    /// Builds the report from raw counts. An empty denominator gives a
    /// precision or recall of 1.
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 1.0 } else { num as f64 / den as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
        EvalReport { true_positives: tp, false_positives: fp, false_negatives: fn_, precision, recall, f1 }
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tp = {}", self.true_positives)?;
        writeln!(f, "fp = {}", self.false_positives)?;
        writeln!(f, "fn = {}", self.false_negatives)?;
        writeln!(f, "precision = {:.6}", self.precision)?;
        writeln!(f, "recall = {:.6}", self.recall)?;
        write!(f, "f1 = {:.6}", self.f1)
    }
}

/// Matches on (source, target, relation); confidences are ignored.
pub fn evaluate(m: &Alignment, reference: &Alignment) -> EvalReport {
    let tp = m.keys().filter(|k| reference.contains_key(k)).count();
    EvalReport::from_counts(tp, m.len() - tp, reference.len() - tp)
}

/// Recall restricted to the given keys of the reference.
pub fn recall_over<'a>(m: &Alignment, keys: impl IntoIterator<Item = &'a MappingKey>) -> f64 {
    let (mut hit, mut total) = (0usize, 0usize);
    for k in keys {
        total += 1;
        hit += usize::from(m.contains_key(k));
    }
    if total == 0 {
        1.0
    } else {
        hit as f64 / total as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    /// Which parameter was swept: `theta` or `candidate_threshold`.
    pub parameter: &'static str,
    pub value: f64,
    pub report: EvalReport,
    /// Count of selected mappings present in the reference at the chosen
    /// value, i.e. the unpenalized supervised objective.
    pub literal_objective: usize,
}

/// Sweeps the selector parameter over `{0, step, …, 1}` and returns the
/// smallest value with maximal F1. Threshold mode sweeps `theta`; the other
/// modes sweep a confidence cut applied to the candidates before selection.
pub fn calibrate(
    kg1: &KnowledgeGraph,
    kg2: &KnowledgeGraph,
    candidates: &Alignment,
    reference: &Alignment,
    cfg: &SelectorConfig,
    grid_step: f64,
) -> Result<Calibration> {
    if reference.is_empty() {
        return Err(Error::Contract("calibration needs a non-empty reference".into()));
    }
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(Error::Config(format!("grid step {grid_step} outside (0, 1]")));
    }
    let n = (1.0 / grid_step).round().max(1.0) as usize;
    let parameter = if cfg.mode == Mode::Threshold { "theta" } else { "candidate_threshold" };

    let mut best: Option<Calibration> = None;
    for k in 0..=n {
        let value = k as f64 / n as f64;
        let selected = run_at(kg1, kg2, candidates, cfg, value)?;
        let report = evaluate(&selected, reference);
        log::debug!("{parameter} = {value:.4}: f1 = {:.6}", report.f1);
        if best.as_ref().is_none_or(|b| report.f1 > b.report.f1) {
            best = Some(Calibration { parameter, value, report, literal_objective: report.true_positives });
        }
    }
    Ok(best.expect("grid has at least one point"))
}

/// Selection at one grid value of [`calibrate`].
pub fn run_at(
    kg1: &KnowledgeGraph,
    kg2: &KnowledgeGraph,
    candidates: &Alignment,
    cfg: &SelectorConfig,
    value: f64,
) -> Result<Alignment> {
    if cfg.mode == Mode::Threshold {
        let c = SelectorConfig { theta: value, ..*cfg };
        return Ok(select(kg1, kg2, candidates, &c)?.alignment);
    }
    let kept = Alignment::from_mappings(candidates.iter().filter(|m| m.confidence() >= value).cloned())?;
    Ok(select(kg1, kg2, &kept, cfg)?.alignment)
}
