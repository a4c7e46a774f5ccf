//! Turtle subset: `@prefix` directives and plain `S P O .` triples with
//! prefixed names, `<absolute-iri>` references, and quoted label literals.
//! No blank nodes, collections, `;`/`,` abbreviations or multi-line literals.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{finish, ParseDiagnostic, Parsed};
use crate::error::ParseFailure;
use crate::model::{Axiom, EntityKind, Iri, KnowledgeGraph, Label};

const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
const OWL: &str = "http://www.w3.org/2002/07/owl#";
const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Prefix,
    IriRef(String),
    PName { prefix: String, local: String },
    A,
    Literal { text: String, lang: Option<String> },
    Dot,
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
    pending_dot: Option<Pos>,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { chars: src.chars().peekable(), pos: Pos { line: 1, column: 1 }, pending_dot: None }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    /// Skips to the end of the current statement after an error.
    fn recover(&mut self) {
        if self.pending_dot.take().is_some() {
            return;
        }
        while let Some(c) = self.bump() {
            if c == '.' && self.chars.peek().is_none_or(|c| c.is_whitespace()) {
                break;
            }
            if c == '\n' {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Option<Result<(Pos, Tok), (Pos, String)>> {
        if let Some(pos) = self.pending_dot.take() {
            return Some(Ok((pos, Tok::Dot)));
        }
        self.skip_trivia();
        let start = self.pos;
        let c = *self.chars.peek()?;
        let tok = match c {
            '.' => {
                self.bump();
                Ok(Tok::Dot)
            }
            '<' => self.iri_ref(),
            '"' => self.literal(),
            '@' => {
                self.bump();
                let word = self.take_while(|c| c.is_ascii_alphanumeric());
                if word == "prefix" {
                    Ok(Tok::Prefix)
                } else {
                    Err(format!("unsupported directive @{word}"))
                }
            }
            ';' | ',' => {
                self.bump();
                Err(format!("predicate/object list abbreviation '{c}' is not supported"))
            }
            '[' | ']' | '(' | ')' => {
                self.bump();
                Err("blank nodes and collections are not supported".into())
            }
            '\'' => {
                self.bump();
                Err("single-quoted literals are not supported".into())
            }
            _ => self.name(),
        };
        Some(tok.map(|t| (start, t)).map_err(|m| (start, m)))
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn iri_ref(&mut self) -> Result<Tok, String> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.chars.peek() {
                Some('>') => {
                    self.bump();
                    return Ok(Tok::IriRef(s));
                }
                Some(&c) if c.is_whitespace() => return Err("unterminated IRI reference".into()),
                Some(&c) => {
                    s.push(c);
                    self.bump();
                }
                None => return Err("unterminated IRI reference".into()),
            }
        }
    }

    fn literal(&mut self) -> Result<Tok, String> {
        self.bump();
        let mut text = String::new();
        loop {
            match self.bump() {
                None => return Err("unterminated string literal".into()),
                Some('\n') => return Err("multi-line literals are not supported".into()),
                Some('"') => break,
                Some('\\') => match self.bump() {
                    Some('"') => text.push('"'),
                    Some('\\') => text.push('\\'),
                    Some('n') => text.push('\n'),
                    Some('t') => text.push('\t'),
                    Some('r') => text.push('\r'),
                    Some(c) => return Err(format!("unsupported escape sequence \\{c}")),
                    None => return Err("unterminated string literal".into()),
                },
                Some(c) => text.push(c),
            }
        }
        let lang = match self.chars.peek() {
            Some('@') => {
                self.bump();
                let tag = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                if tag.is_empty() || !tag.starts_with(|c: char| c.is_ascii_alphabetic()) || tag.ends_with('-') {
                    return Err(format!("malformed language tag @{tag}"));
                }
                Some(tag)
            }
            Some('^') => return Err("typed literals are not supported".into()),
            _ => None,
        };
        Ok(Tok::Literal { text, lang })
    }

    fn name(&mut self) -> Result<Tok, String> {
        let mut word = self.take_while(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | ':' | '.' | '%'));
        if word.is_empty() {
            let c = self.bump().unwrap_or(' ');
            return Err(format!("unexpected character '{c}'"));
        }
        // A trailing '.' terminates the statement rather than belonging to the name.
        let mut dots = 0;
        while word.ends_with('.') {
            word.pop();
            dots += 1;
        }
        if dots > 1 {
            return Err(format!("unexpected '.' after {word}"));
        }
        if dots == 1 {
            self.pending_dot = Some(Pos { line: self.pos.line, column: self.pos.column - 1 });
        }
        if word == "a" {
            return Ok(Tok::A);
        }
        let Some((prefix, local)) = word.split_once(':') else {
            return Err(format!("unexpected token '{word}'"));
        };
        let valid_prefix = prefix.is_empty()
            || (prefix.starts_with(|c: char| c.is_alphabetic())
                && prefix.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.')));
        if !valid_prefix {
            return Err(format!("malformed prefix name '{prefix}:'"));
        }
        Ok(Tok::PName { prefix: prefix.to_owned(), local: local.to_owned() })
    }
}

struct Statement {
    terms: Vec<(Pos, Tok)>,
}

enum Term {
    Iri(Iri),
    Literal(Label),
    A,
}

/// Parses the Turtle subset into a graph. Declarations may appear anywhere
/// in the file (statements are collected first and resolved afterwards), so
/// the result does not depend on statement order. `path` is only used for
/// diagnostics.
pub fn parse_ontology(source: &str, id: &str, path: &str) -> Result<Parsed<KnowledgeGraph>, ParseFailure> {
    let mut diags = Vec::new();
    let mut lexer = Lexer::new(source);
    let mut statements = Vec::new();
    let mut current: Vec<(Pos, Tok)> = Vec::new();

    while let Some(tok) = lexer.next_token() {
        match tok {
            Ok((_, Tok::Dot)) => statements.push(Statement { terms: std::mem::take(&mut current) }),
            Ok(t) => current.push(t),
            Err((pos, msg)) => {
                diags.push(ParseDiagnostic::error(path, pos.line, pos.column, msg));
                current.clear();
                lexer.recover();
            }
        }
    }
    if let Some((pos, _)) = current.first() {
        diags.push(ParseDiagnostic::error(path, pos.line, pos.column, "missing '.' at end of statement"));
    }

    // Prefix directives first, wherever they occur.
    let mut prefixes: BTreeMap<String, String> = BTreeMap::new();
    let mut triples = Vec::new();
    for st in statements {
        match st.terms.as_slice() {
            [(pos, Tok::Prefix), (_, Tok::PName { prefix, local }), (ipos, Tok::IriRef(iri))] => {
                if !local.is_empty() {
                    diags.push(ParseDiagnostic::error(
                        path,
                        pos.line,
                        pos.column,
                        format!("expected a prefix name ending in ':' but found {prefix}:{local}"),
                    ));
                } else if Iri::new(iri).is_err() {
                    diags.push(ParseDiagnostic::error(
                        path,
                        ipos.line,
                        ipos.column,
                        format!("prefix {prefix}: must expand to an absolute IRI, got <{iri}>"),
                    ));
                } else if let Some(prev) = prefixes.insert(prefix.clone(), iri.clone()) {
                    if &prev != iri {
                        diags.push(ParseDiagnostic::error(
                            path,
                            pos.line,
                            pos.column,
                            format!("prefix {prefix}: redeclared as <{iri}> (was <{prev}>)"),
                        ));
                    }
                }
            }
            [(pos, Tok::Prefix), ..] => {
                diags.push(ParseDiagnostic::error(path, pos.line, pos.column, "malformed @prefix directive"))
            }
            [s, p, o] => triples.push([s.clone(), p.clone(), o.clone()]),
            [] => {}
            [(pos, _), ..] => diags.push(ParseDiagnostic::error(
                path,
                pos.line,
                pos.column,
                format!("expected 'subject predicate object .', found {} terms", st.terms.len()),
            )),
        }
    }

    let resolve = |(pos, tok): &(Pos, Tok), diags: &mut Vec<ParseDiagnostic>| -> Option<Term> {
        let err = |m: String| ParseDiagnostic::error(path, pos.line, pos.column, m);
        match tok {
            Tok::A => Some(Term::A),
            Tok::Literal { text, lang } => Some(Term::Literal(Label { text: text.clone(), lang: lang.clone() })),
            Tok::IriRef(s) => match Iri::new(s) {
                Ok(i) => Some(Term::Iri(i)),
                Err(e) => {
                    diags.push(err(e.to_string()));
                    None
                }
            },
            Tok::PName { prefix, local } => {
                let Some(ns) = prefixes.get(prefix) else {
                    diags.push(err(format!("undeclared prefix '{prefix}:'")));
                    return None;
                };
                match Iri::new(format!("{ns}{local}")) {
                    Ok(i) => Some(Term::Iri(i)),
                    Err(e) => {
                        diags.push(err(format!("{prefix}:{local} does not expand to an absolute IRI: {e}")));
                        None
                    }
                }
            }
            Tok::Prefix | Tok::Dot => {
                diags.push(err("unexpected token".into()));
                None
            }
        }
    };

    let mut resolved = Vec::new();
    for [st, pt, ot] in &triples {
        let s = resolve(st, &mut diags);
        let p = resolve(pt, &mut diags);
        let o = resolve(ot, &mut diags);
        if let (Some(s), Some(p), Some(o)) = (s, p, o) {
            resolved.push((st.0, s, pt.0, p, ot.0, o));
        }
    }

    let rdf_type = format!("{RDF}type");
    let is_type = |p: &Term| match p {
        Term::A => true,
        Term::Iri(i) => i.as_str() == rdf_type,
        Term::Literal(_) => false,
    };

    // Pass 1: declarations.
    let mut builder = KnowledgeGraph::builder(id);
    for (spos, s, _, p, opos, o) in &resolved {
        if !is_type(p) {
            continue;
        }
        let Term::Iri(subject) = s else {
            diags.push(ParseDiagnostic::error(path, spos.line, spos.column, "subject must be an IRI"));
            continue;
        };
        let Term::Iri(ty) = o else {
            diags.push(ParseDiagnostic::error(path, opos.line, opos.column, "rdf:type object must be an IRI"));
            continue;
        };
        let kind = match ty.as_str().strip_prefix(OWL) {
            Some("Class") => EntityKind::Class,
            Some("ObjectProperty") => EntityKind::ObjectProperty,
            Some("DatatypeProperty") => EntityKind::DataProperty,
            Some("NamedIndividual") => EntityKind::Individual,
            _ => {
                diags.push(ParseDiagnostic::warning(
                    path,
                    opos.line,
                    opos.column,
                    format!("ignoring unrecognized type <{ty}>"),
                ));
                continue;
            }
        };
        if let Err(e) = builder.declare(subject.clone(), kind) {
            diags.push(ParseDiagnostic::error(path, spos.line, spos.column, e.to_string()));
        }
    }

    // Pass 2: axioms and labels. Primary labels (rdfs:label) precede
    // alternative labels (skos:altLabel); each keeps document order.
    let mut alt_labels = Vec::new();
    for (spos, s, ppos, p, opos, o) in &resolved {
        if is_type(p) {
            continue;
        }
        let Term::Iri(pred) = p else {
            diags.push(ParseDiagnostic::error(path, ppos.line, ppos.column, "predicate must be an IRI"));
            continue;
        };
        let Term::Iri(subject) = s else {
            diags.push(ParseDiagnostic::error(path, spos.line, spos.column, "subject must be an IRI"));
            continue;
        };
        let p = pred.as_str();
        let axiom_ctor: Option<fn(Iri, Iri) -> Axiom> = if p == format!("{RDFS}subClassOf") {
            Some(Axiom::subclass)
        } else if p == format!("{OWL}equivalentClass") {
            Some(Axiom::equivalent)
        } else if p == format!("{OWL}disjointWith") {
            Some(Axiom::disjoint)
        } else {
            None
        };
        if let Some(ctor) = axiom_ctor {
            let Term::Iri(object) = o else {
                diags.push(ParseDiagnostic::error(path, opos.line, opos.column, "axiom object must be an IRI"));
                continue;
            };
            let mut ok = true;
            for (iri, pos) in [(subject, spos), (object, opos)] {
                if builder.kind_of(iri) != Some(EntityKind::Class) {
                    diags.push(ParseDiagnostic::error(
                        path,
                        pos.line,
                        pos.column,
                        format!("{iri} is used in a class axiom but never declared as owl:Class"),
                    ));
                    ok = false;
                }
            }
            if ok {
                builder.axiom(ctor(subject.clone(), object.clone()));
            }
            continue;
        }
        let primary = p == format!("{RDFS}label");
        if primary || p == format!("{SKOS}altLabel") {
            let Term::Literal(label) = o else {
                diags.push(ParseDiagnostic::error(
                    path,
                    opos.line,
                    opos.column,
                    "label object must be a string literal",
                ));
                continue;
            };
            if label.text.is_empty() {
                diags.push(ParseDiagnostic::warning(path, opos.line, opos.column, "ignoring empty label"));
                continue;
            }
            if builder.kind_of(subject).is_none() {
                diags.push(ParseDiagnostic::warning(
                    path,
                    spos.line,
                    spos.column,
                    format!("ignoring label of undeclared entity {subject}"),
                ));
                continue;
            }
            if primary {
                builder.entity_mut(subject).expect("declared").add_label(label.clone());
            } else {
                alt_labels.push((subject.clone(), label.clone()));
            }
            continue;
        }
        diags.push(ParseDiagnostic::warning(
            path,
            ppos.line,
            ppos.column,
            format!("ignoring unrecognized predicate <{pred}>"),
        ));
    }
    for (subject, label) in alt_labels {
        builder.entity_mut(&subject).expect("declared").add_label(label);
    }

    if diags.iter().any(ParseDiagnostic::is_error) {
        return finish(|| unreachable!(), diags);
    }
    match builder.build() {
        Ok(kg) => finish(|| kg, diags),
        Err(e) => {
            diags.push(ParseDiagnostic::error(path, 1, 1, e.to_string()));
            finish(|| unreachable!(), diags)
        }
    }
}

fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

/// Writes the graph in the Turtle subset: sorted prefix block, then
/// entities sorted by IRI, then axioms in canonical order.
pub fn serialize_ontology(kg: &KnowledgeGraph) -> String {
    let mut out = String::new();
    for (p, ns) in [("owl", OWL), ("rdfs", RDFS), ("skos", SKOS)] {
        let _ = writeln!(out, "@prefix {p}: <{ns}> .");
    }
    if kg.entities().len() > 0 {
        out.push('\n');
    }
    for e in kg.entities() {
        let ty = match e.kind {
            EntityKind::Class => "owl:Class",
            EntityKind::ObjectProperty => "owl:ObjectProperty",
            EntityKind::DataProperty => "owl:DatatypeProperty",
            EntityKind::Individual => "owl:NamedIndividual",
        };
        let _ = writeln!(out, "<{}> a {ty} .", e.iri);
        for (i, label) in e.labels().iter().enumerate() {
            let pred = if i == 0 { "rdfs:label" } else { "skos:altLabel" };
            let _ = write!(out, "<{}> {pred} \"{}\"", e.iri, escape_literal(&label.text));
            if let Some(lang) = &label.lang {
                let _ = write!(out, "@{lang}");
            }
            out.push_str(" .\n");
        }
    }
    if !kg.axioms().is_empty() {
        out.push('\n');
    }
    for ax in kg.axioms() {
        let (pred, (a, b)) = match ax {
            Axiom::SubClassOf { .. } => ("rdfs:subClassOf", ax.operands()),
            Axiom::EquivalentClass { .. } => ("owl:equivalentClass", ax.operands()),
            Axiom::DisjointWith { .. } => ("owl:disjointWith", ax.operands()),
        };
        let _ = writeln!(out, "<{a}> {pred} <{b}> .");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "@prefix : <http://example.org/o#> .\n\
        @prefix owl: <http://www.w3.org/2002/07/owl#> .\n\
        @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
        @prefix skos: <http://www.w3.org/2004/02/skos/core#> .\n";

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://example.org/o#{s}")).unwrap()
    }

    fn parse(body: &str) -> Result<Parsed<KnowledgeGraph>, ParseFailure> {
        parse_ontology(&format!("{HEADER}{body}"), "o", "test.ttl")
    }

    #[test]
    fn subclass_triple_becomes_axiom() {
        let kg = parse(":A a owl:Class .\n:B a owl:Class .\n:A rdfs:subClassOf :B .\n").unwrap().value;
        assert_eq!(kg.axioms(), &[Axiom::subclass(iri("A"), iri("B"))]);
    }

    #[test]
    fn declarations_may_follow_use() {
        let kg = parse(":A rdfs:subClassOf :B .\n:A a owl:Class .\n:B a owl:Class .\n").unwrap().value;
        assert_eq!(kg.axioms().len(), 1);
    }

    #[test]
    fn undeclared_prefix_is_an_error_at_its_line() {
        let err = parse(":A a owl:Class .\nx:B a owl:Class .\n").unwrap_err();
        assert_eq!(err.diagnostics.len(), 1);
        let d = &err.diagnostics[0];
        assert!(d.is_error());
        assert_eq!((d.line, d.column), (6, 1));
        assert!(d.message.contains("undeclared prefix"));
    }

    #[test]
    fn axiom_on_non_class_is_an_error() {
        let err = parse(":A a owl:Class .\n:A rdfs:subClassOf :B .\n").unwrap_err();
        assert_eq!(err.diagnostics[0].line, 6);
        assert!(err.diagnostics[0].message.contains("never declared as owl:Class"));
    }

    #[test]
    fn unknown_predicate_is_a_warning() {
        let parsed = parse(":A a owl:Class .\n:A rdfs:comment \"x\" .\n:O a owl:Ontology .\n").unwrap();
        assert_eq!(parsed.warnings.len(), 2);
        assert!(parsed.warnings.iter().all(|w| !w.is_error()));
        assert_eq!(parsed.value.entities().len(), 1);
    }

    #[test]
    fn labels_primary_then_alternates() {
        let kg = parse(
            ":A skos:altLabel \"Alt\" .\n:A rdfs:label \"Main\"@en .\n:A a owl:Class .\n:A rdfs:label \"Main\"@en .\n",
        )
        .unwrap()
        .value;
        let e = kg.entity(&iri("A")).unwrap();
        assert_eq!(e.labels(), &[Label::with_lang("Main", "en"), Label::new("Alt")]);
    }

    #[test]
    fn abbreviations_and_blank_nodes_rejected() {
        assert!(parse(":A a owl:Class ; rdfs:label \"x\" .\n").is_err());
        assert!(parse(":A rdfs:subClassOf [ a owl:Class ] .\n").is_err());
        assert!(parse(":A rdfs:label \"multi\nline\" .\n").is_err());
        assert!(parse(":A a owl:Class\n").is_err());
    }

    #[test]
    fn non_absolute_expansion_rejected() {
        let err = parse_ontology("@prefix r: <rel/> .\n", "o", "t.ttl").unwrap_err();
        assert_eq!(err.diagnostics[0].line, 1);
    }

    #[test]
    fn full_iris_and_comments() {
        let src = "# comment\n<http://x.org/A> a <http://www.w3.org/2002/07/owl#Class> . # trailing\n";
        let kg = parse_ontology(src, "o", "t.ttl").unwrap().value;
        assert!(kg.contains(&Iri::new("http://x.org/A").unwrap()));
    }

    #[test]
    fn literal_escapes() {
        let kg = parse(":A a owl:Class .\n:A rdfs:label \"say \\\"hi\\\" \\\\ ok\" .\n").unwrap().value;
        assert_eq!(kg.entity(&iri("A")).unwrap().labels()[0].text, "say \"hi\" \\ ok");
        let round = parse_ontology(&serialize_ontology(&kg), "o", "t.ttl").unwrap().value;
        assert_eq!(round, kg);
    }

    #[test]
    fn empty_graph_serializes_to_prefix_block() {
        let text = serialize_ontology(&KnowledgeGraph::empty("g"));
        assert_eq!(
            text,
            "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n\
             @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
             @prefix skos: <http://www.w3.org/2004/02/skos/core#> .\n"
        );
    }

    #[test]
    fn disjointness_serialized_canonically() {
        let kg = parse(":A a owl:Class .\n:B a owl:Class .\n:B owl:disjointWith :A .\n").unwrap().value;
        let text = serialize_ontology(&kg);
        assert!(text.contains("<http://example.org/o#A> owl:disjointWith <http://example.org/o#B> ."));
    }

    #[test]
    fn round_trip_structural_equality() {
        let kg = parse(
            ":B a owl:Class .\n:A a owl:Class .\n:p a owl:ObjectProperty .\n:i a owl:NamedIndividual .\n\
             :A rdfs:subClassOf :B .\n:A owl:equivalentClass :B .\n:A rdfs:label \"Alpha\" .\n:A skos:altLabel \"Alef\"@he .\n",
        )
        .unwrap()
        .value;
        let text = serialize_ontology(&kg);
        let again = parse_ontology(&text, "o", "t.ttl").unwrap().value;
        assert_eq!(again, kg);
        assert_eq!(serialize_ontology(&again), text);
    }
}
