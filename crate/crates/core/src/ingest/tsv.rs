//! Alignment TSV: `source<TAB>target<TAB>rel<TAB>confidence`, one mapping
//! per line, `#` comment lines, rel one of `=`, `<`, `>`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::ParseDiagnostic;
use crate::alignment::{Alignment, Mapping, MappingKey, Relation};
use crate::error::ParseFailure;
use crate::model::Iri;
use crate::selector::ScoredMapping;

const HEADER: &str = "# source\ttarget\trelation\tconfidence";

/// Parses a confidence written as a plain decimal with at most six
/// fractional digits.
fn parse_confidence(s: &str) -> Result<f64, String> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let well_formed = !int.is_empty()
        && int.chars().all(|c| c.is_ascii_digit())
        && frac.chars().all(|c| c.is_ascii_digit())
        && !(digits.contains('.') && frac.is_empty());
    if !well_formed {
        return Err(format!("unparsable confidence '{s}'"));
    }
    let value: f64 = s.parse().map_err(|_| format!("unparsable confidence '{s}'"))?;
    if !(0.0..=1.0).contains(&value) {
        return Err(format!("confidence out of range: {s}"));
    }
    if frac.len() > 6 {
        return Err(format!("confidence '{s}' has more than 6 fractional digits"));
    }
    Ok(value)
}

pub fn read_alignment(source: &str, path: &str) -> Result<Alignment, ParseFailure> {
    let mut diags = Vec::new();
    let mut seen: BTreeMap<MappingKey, usize> = BTreeMap::new();
    let mut alignment = Alignment::new();

    for (idx, raw) in source.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            diags.push(ParseDiagnostic::error(
                path,
                line_no,
                1,
                format!("expected 4 tab-separated columns, found {}", cols.len()),
            ));
            continue;
        }
        // 1-based column where each field starts
        let mut col_start = [1usize; 4];
        for i in 1..4 {
            col_start[i] = col_start[i - 1] + cols[i - 1].chars().count() + 1;
        }
        let mut err = |i: usize, msg: String| diags.push(ParseDiagnostic::error(path, line_no, col_start[i], msg));

        let source_iri = Iri::new(cols[0]).map_err(|e| err(0, e.to_string())).ok();
        let target_iri = Iri::new(cols[1]).map_err(|e| err(1, e.to_string())).ok();
        let relation = Relation::from_symbol(cols[2]);
        if relation.is_none() {
            err(2, format!("unknown relation symbol '{}' (expected =, < or >)", cols[2]));
        }
        let confidence = parse_confidence(cols[3]).map_err(|m| err(3, m)).ok();

        if let (Some(s), Some(t), Some(r), Some(c)) = (source_iri, target_iri, relation, confidence) {
            let mapping = Mapping::new(s, t, r, c).expect("confidence validated");
            let key = mapping.key();
            if let Some(first) = seen.get(&key) {
                diags.push(ParseDiagnostic::error(
                    path,
                    line_no,
                    1,
                    format!("duplicate mapping {key} (first on line {first})"),
                ));
                continue;
            }
            seen.insert(key, line_no);
            alignment.insert(mapping).expect("key checked");
        }
    }
    super::finish(|| alignment, diags).map(|p| p.value)
}

/// Writes an alignment in key order. When `scores` is given, each row is
/// preceded by a comment carrying its selection score and status; readers
/// ignore these.
pub fn write_alignment(a: &Alignment, scores: Option<&[ScoredMapping]>) -> String {
    let by_key: BTreeMap<MappingKey, &ScoredMapping> =
        scores.unwrap_or_default().iter().map(|s| (s.mapping.key(), s)).collect();
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for m in a {
        if let Some(s) = by_key.get(&m.key()) {
            let _ = writeln!(out, "# score={:.6} status={}", s.objective_score, s.status);
        }
        let _ = writeln!(out, "{}\t{}\t{}\t{:.6}", m.source, m.target, m.relation.symbol(), m.confidence());
    }
    out
}
