use std::fmt;
use std::sync::Arc;

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Knowledge-graph namespaces. The `avi:` prefix maps to [`ns::BASE`].
pub mod ns {
    pub const BASE: &str = "http://aeroqa.example/kg/";
    pub const CLASS: &str = "http://aeroqa.example/kg/class/";
    pub const INST: &str = "http://aeroqa.example/kg/inst/";
    pub const ACC: &str = "http://aeroqa.example/kg/acc/";
    pub const REL: &str = "http://aeroqa.example/kg/rel/";
    pub const DATA: &str = "http://aeroqa.example/kg/data/";
    pub const LABEL: &str = "http://aeroqa.example/kg/label";
    pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
    pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const SUBCLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";

    /// Prefixes every graph and generated query starts with.
    pub fn default_prefixes() -> super::PrefixMap {
        [("avi", BASE), ("rdf", RDF), ("rdfs", RDFS)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }
}

pub type PrefixMap = std::collections::BTreeMap<String, String>;

/// An IRI: non-empty, no whitespace, none of the characters that would break
/// the line format (`<>"{}|^\``\\`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(s: impl AsRef<str>) -> Result<Self> {
        let s = s.as_ref();
        if s.is_empty() {
            return Err(Error::Validation("empty IRI".into()));
        }
        if let Some(c) = s.chars().find(|c| c.is_whitespace() || c.is_control() || "<>\"{}|^`\\".contains(*c)) {
            return Err(Error::Validation(format!("invalid character {c:?} in IRI {s:?}")));
        }
        Ok(Iri(Arc::from(s)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Segment after the last `/` or `#`.
    pub fn local_name(&self) -> &str {
        let s = self.as_str();
        match s.rfind(['/', '#']) {
            Some(i) if i + 1 < s.len() => &s[i + 1..],
            _ => s,
        }
    }

    pub fn in_namespace(&self, base: &str) -> bool {
        self.0.starts_with(base)
    }
}

impl TryFrom<String> for Iri {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Iri::new(s)
    }
}

impl From<Iri> for String {
    fn from(i: Iri) -> String {
        i.0.to_string()
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Literal(Arc<str>),
}

impl Term {
    pub fn iri(s: impl AsRef<str>) -> Result<Self> {
        Iri::new(s).map(Term::Iri)
    }

    pub fn literal(s: impl AsRef<str>) -> Self {
        Term::Literal(Arc::from(s.as_ref()))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            Term::Literal(_) => None,
        }
    }

    /// IRI string or literal text.
    pub fn lexical(&self) -> &str {
        match self {
            Term::Iri(i) => i.as_str(),
            Term::Literal(l) => l,
        }
    }
}

impl From<Iri> for Term {
    fn from(i: Iri) -> Self {
        Term::Iri(i)
    }
}

pub(crate) fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => write!(f, "{i}"),
            Term::Literal(l) => write!(f, "\"{}\"", escape_literal(l)),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    /// Checked constructor from general terms: subject and predicate must be IRIs.
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self> {
        let Term::Iri(subject) = subject else {
            return Err(Error::Validation(format!("subject must be an IRI, got {subject}")));
        };
        let Term::Iri(predicate) = predicate else {
            return Err(Error::Validation(format!("predicate must be an IRI, got {predicate}")));
        };
        Ok(Triple { subject, predicate, object })
    }

    pub fn from_iris(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple { subject, predicate, object: object.into() }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

const LOCAL_NAME_ESCAPE: &AsciiSet = &NON_ALPHANUMERIC.remove(b'_').remove(b'-');

/// Mint an IRI for a free-text label under `namespace`: whitespace runs become
/// `_`, everything else outside `[A-Za-z0-9_-]` is percent-encoded.
pub fn mint(namespace: &str, label: &str) -> Result<Iri> {
    let joined = label.split_whitespace().collect::<Vec<_>>().join("_");
    if joined.is_empty() {
        return Err(Error::Validation(format!("cannot mint an IRI from blank label {label:?}")));
    }
    Iri::new(format!("{namespace}{}", utf8_percent_encode(&joined, LOCAL_NAME_ESCAPE)))
}
