use std::collections::HashSet;
use std::path::Path;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::report::ReportRecord;
use crate::error::{Error, Result};
use crate::triplestore::{mint, ns, Iri, Term, Triple};

const ACCIDENT_NUMBER_VAR: &str = "accident_number";

/// Which part of a report a pattern reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    /// Each findings row, rendered `Category: Cause - Reason`.
    Findings,
    /// The value of one header.
    Field(String),
    /// Each narrative paragraph.
    Narrative,
}

impl Selector {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "findings" => Ok(Selector::Findings),
            "narrative" => Ok(Selector::Narrative),
            _ => match s.strip_prefix("field:") {
                Some(k) if !k.trim().is_empty() => Ok(Selector::Field(k.trim().to_string())),
                _ => Err(Error::Config(format!("unknown selector `{s}`"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Segment {
    Text(String),
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TemplateKind {
    /// `namespace` is the fixed prefix; the remainder is minted as a local name.
    Iri { namespace: String },
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Template {
    kind: TemplateKind,
    segments: Vec<Segment>,
}

fn split_segments(s: &str) -> Result<Vec<Segment>> {
    let mut out = Vec::new();
    let mut rest = s;
    while let Some(open) = rest.find('{') {
        if open > 0 {
            out.push(Segment::Text(rest[..open].to_string()));
        }
        let close = rest[open..]
            .find('}')
            .ok_or_else(|| Error::Config(format!("unclosed `{{` in template `{s}`")))?;
        let name = &rest[open + 1..open + close];
        if name.is_empty() {
            return Err(Error::Config(format!("empty placeholder in template `{s}`")));
        }
        out.push(Segment::Var(name.to_string()));
        rest = &rest[open + close + 1..];
    }
    if !rest.is_empty() {
        out.push(Segment::Text(rest.to_string()));
    }
    Ok(out)
}

fn expand_curie(s: &str) -> Result<String> {
    if let Some(full) = s.strip_prefix('<').and_then(|x| x.strip_suffix('>')) {
        return Ok(full.to_string());
    }
    let (prefix, local) = s
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("template `{s}` is neither `<iri>`, `prefix:local` nor a quoted literal")))?;
    let base = ns::default_prefixes()
        .get(prefix)
        .cloned()
        .ok_or_else(|| Error::Config(format!("unknown prefix `{prefix}:` in template `{s}`")))?;
    Ok(format!("{base}{local}"))
}

impl Template {
    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() >= 2 && s.starts_with('"') && s.ends_with('"') {
            return Ok(Template { kind: TemplateKind::Literal, segments: split_segments(&s[1..s.len() - 1])? });
        }
        let full = expand_curie(s)?;
        let known = [ns::CLASS, ns::INST, ns::ACC, ns::REL, ns::DATA];
        let namespace = match known.iter().find(|n| full.starts_with(**n)) {
            Some(n) => n.to_string(),
            None => full[..full.find('{').unwrap_or(full.len())].to_string(),
        };
        let segments = split_segments(&full[namespace.len()..])?;
        if segments.is_empty() {
            Iri::new(&namespace)?;
        }
        Ok(Template { kind: TemplateKind::Iri { namespace }, segments })
    }

    fn vars(&self) -> impl Iterator<Item = &str> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Var(v) => Some(v.as_str()),
            Segment::Text(_) => None,
        })
    }

    fn is_constant(&self) -> bool {
        self.vars().next().is_none()
    }

    fn fill(&self, lookup: &dyn Fn(&str) -> Option<String>) -> Option<String> {
        let mut out = String::new();
        for seg in &self.segments {
            match seg {
                Segment::Text(t) => out.push_str(t),
                Segment::Var(v) => out.push_str(lookup(v)?.trim()),
            }
        }
        Some(out)
    }

    /// The term plus, for minted individuals, the label it was minted from.
    fn render(&self, lookup: &dyn Fn(&str) -> Option<String>) -> Option<Result<(Term, Option<String>)>> {
        let filled = self.fill(lookup)?;
        Some(match &self.kind {
            TemplateKind::Literal => Ok((Term::literal(filled), None)),
            TemplateKind::Iri { namespace } if filled.is_empty() => Iri::new(namespace).map(|i| (Term::Iri(i), None)),
            TemplateKind::Iri { namespace } => {
                let individual = !self.is_constant() && (namespace == ns::INST || namespace == ns::ACC);
                mint(namespace, &filled).map(|i| (Term::Iri(i), individual.then_some(filled)))
            }
        })
    }
}

/// Wire form of one pattern in the JSON pattern file.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawPattern {
    selector: String,
    regex: String,
    subject: String,
    predicate: String,
    object: String,
}

/// A regex over one part of a report plus subject/predicate/object templates.
///
/// Templates are `prefix:local`, `<iri>` or `"literal"` and may contain
/// `{group}` placeholders naming regex groups, or `{accident_number}`.
/// Placeholder values in IRIs are minted as local names.
#[derive(Debug, Clone)]
pub struct ExtractionPattern {
    pub selector: Selector,
    regex: Regex,
    subject: Template,
    predicate: Iri,
    object: Template,
}

impl ExtractionPattern {
    pub fn new(selector: &str, regex: &str, subject: &str, predicate: &str, object: &str) -> Result<Self> {
        let selector = Selector::parse(selector)?;
        let regex = Regex::new(regex).map_err(|e| Error::Config(format!("bad regex `{regex}`: {e}")))?;
        let subject = Template::parse(subject)?;
        if subject.kind == TemplateKind::Literal {
            return Err(Error::Config("subject template cannot be a literal".into()));
        }
        let pred = Template::parse(predicate)?;
        if pred.kind == TemplateKind::Literal || !pred.is_constant() {
            return Err(Error::Config(format!("predicate `{predicate}` must be a constant IRI")));
        }
        let TemplateKind::Iri { namespace } = &pred.kind else { unreachable!() };
        let predicate = Iri::new(format!("{namespace}{}", pred.fill(&|_| None).unwrap_or_default()))?;
        let object = Template::parse(object)?;

        let groups: HashSet<&str> = regex.capture_names().flatten().collect();
        if groups.contains(ACCIDENT_NUMBER_VAR) {
            return Err(Error::Config(format!("`{ACCIDENT_NUMBER_VAR}` is reserved and cannot be a regex group")));
        }
        for v in subject.vars().chain(object.vars()) {
            if v != ACCIDENT_NUMBER_VAR && !groups.contains(v) {
                return Err(Error::Config(format!("template references undefined group `{v}`")));
            }
        }
        Ok(ExtractionPattern { selector, regex, subject, predicate, object })
    }

    pub fn regex(&self) -> &Regex {
        &self.regex
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    fn inputs<'r>(&self, record: &'r ReportRecord) -> Vec<std::borrow::Cow<'r, str>> {
        match &self.selector {
            Selector::Findings => record.findings.iter().map(|f| f.to_string().into()).collect(),
            Selector::Field(k) => record.field(k).map(Into::into).into_iter().collect(),
            Selector::Narrative => record.narrative.iter().map(|p| p.text.as_str().into()).collect(),
        }
    }

    fn apply(&self, record: &ReportRecord, out: &mut Vec<Triple>) -> Result<()> {
        let label_pred = Iri::new(ns::LABEL)?;
        for text in self.inputs(record) {
            for caps in self.regex.captures_iter(&text) {
                let lookup = |name: &str| -> Option<String> {
                    if name == ACCIDENT_NUMBER_VAR {
                        Some(record.accident_number.clone())
                    } else {
                        caps.name(name).map(|m| m.as_str().to_string()).filter(|s| !s.trim().is_empty())
                    }
                };
                // an optional group that did not take part skips the match
                let (Some(s), Some(o)) = (self.subject.render(&lookup), self.object.render(&lookup)) else {
                    log::debug!("pattern {} skipped a match with an empty group", self.regex.as_str());
                    continue;
                };
                let (s, s_label) = s?;
                let (o, o_label) = o?;
                let s_iri = s.as_iri().cloned().expect("subject template is an IRI");
                out.push(Triple::from_iris(s_iri.clone(), self.predicate.clone(), o.clone()));
                if let Some(l) = s_label {
                    out.push(Triple::from_iris(s_iri, label_pred.clone(), Term::literal(l)));
                }
                if let (Some(l), Term::Iri(o_iri)) = (o_label, o) {
                    out.push(Triple::from_iris(o_iri, label_pred.clone(), Term::literal(l)));
                }
            }
        }
        Ok(())
    }
}

/// Parses the JSON pattern file: an array of
/// `{selector, regex, subject, predicate, object}` objects.
pub fn load_patterns(json: &str) -> Result<Vec<ExtractionPattern>> {
    let raw: Vec<RawPattern> = serde_json::from_str(json)?;
    raw.iter()
        .enumerate()
        .map(|(i, r)| {
            ExtractionPattern::new(&r.selector, &r.regex, &r.subject, &r.predicate, &r.object)
                .map_err(|e| Error::Config(format!("pattern #{}: {e}", i + 1)))
        })
        .collect()
}

impl ExtractionPattern {
    pub fn load_file(path: impl AsRef<Path>) -> Result<Vec<Self>> {
        load_patterns(&std::fs::read_to_string(path)?)
    }
}

/// Applies every pattern in order. Each match yields its triple followed by
/// label triples for any individual IRI it minted; repeats are dropped.
pub fn extract_triples(record: &ReportRecord, patterns: &[ExtractionPattern]) -> Result<Vec<Triple>> {
    let mut all = Vec::new();
    for p in patterns {
        p.apply(record, &mut all)?;
    }
    let mut seen = HashSet::new();
    all.retain(|t| seen.insert(t.clone()));
    Ok(all)
}
