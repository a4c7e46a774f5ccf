//! Plain-text run report.
//!
//! ```text
//! [run]
//! tool = kga 0.1.0
//! command = repair
//!
//! [inputs]
//! source = fma.ttl sha256=…
//!
//! [config]
//! mode = hard
//!
//! [summary]
//! objective_value = 1.000000
//!
//! [mappings]
//! # status  score  source  target  relation  confidence  conflicts
//! accepted  1.000000  …
//!
//! [unsat]
//! # concept  justifications
//!
//! [timing]
//! elapsed_ms = 3
//! ```
//!
//! Sections hold `key = value` lines or tab-separated rows under a `#`
//! header. Justifications are written as `{s r t, …}` groups joined by
//! ` | `. Everything except `[timing]` is a pure function of the inputs and
//! flags.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::alignment::MappingKey;
use crate::reasoner::UnsatReport;
use crate::selector::ScoredMapping;

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    sections: Vec<(String, Vec<String>)>,
    elapsed_ms: Option<u128>,
}

pub fn key_text(k: &MappingKey) -> String {
    format!("{} {} {}", k.source, k.relation.symbol(), k.target)
}

pub fn justification_text(js: &[BTreeSet<MappingKey>]) -> String {
    js.iter()
        .map(|j| format!("{{{}}}", j.iter().map(key_text).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join(" | ")
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        let mut r = RunReport::default();
        r.kv("run", "tool", format!("kga {}", env!("CARGO_PKG_VERSION")));
        r.kv("run", "command", command);
        r
    }

    fn section(&mut self, name: &str) -> &mut Vec<String> {
        if let Some(i) = self.sections.iter().position(|(n, _)| n == name) {
            return &mut self.sections[i].1;
        }
        self.sections.push((name.to_string(), Vec::new()));
        &mut self.sections.last_mut().expect("just pushed").1
    }

    pub fn kv(&mut self, section: &str, key: &str, value: impl std::fmt::Display) {
        let line = format!("{key} = {value}");
        self.section(section).push(line);
    }

    pub fn row(&mut self, section: &str, line: String) {
        self.section(section).push(line);
    }

    pub fn input(&mut self, name: &str, path: &str, digest: &str) {
        self.kv("inputs", name, format!("{path} sha256={digest}"));
    }

    pub fn mappings(&mut self, scored: &[ScoredMapping]) {
        let s = self.section("mappings");
        s.push("# status\tscore\tsource\ttarget\trelation\tconfidence\tconflicts".into());
        for m in scored {
            s.push(format!(
                "{}\t{:.6}\t{}\t{}\t{}\t{:.6}\t{}",
                m.status,
                m.objective_score,
                m.mapping.source,
                m.mapping.target,
                m.mapping.relation.symbol(),
                m.mapping.confidence(),
                justification_text(&m.conflicts)
            ));
        }
    }

    pub fn unsat(&mut self, reports: &[UnsatReport]) {
        let s = self.section("unsat");
        s.push("# concept\tjustifications".into());
        for u in reports {
            s.push(format!("{}\t{}", u.concept, justification_text(&u.justifications)));
        }
    }

    pub fn set_elapsed(&mut self, ms: u128) {
        self.elapsed_ms = Some(ms);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, lines) in &self.sections {
            if !out.is_empty() {
                out.push('\n');
            }
            let _ = writeln!(out, "[{name}]");
            for l in lines {
                let _ = writeln!(out, "{l}");
            }
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = write!(out, "\n[timing]\nelapsed_ms = {ms}\n");
        }
        out
    }
}
