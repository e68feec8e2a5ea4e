//! The SPARQL subset produced by the question translator:
//!
//! ```text
//! Query    := ("PREFIX" PNAME_NS IRIREF)* (Ask | Select)
//! Ask      := "ASK" "WHERE"? Group
//! Select   := "SELECT" ("DISTINCT" Var | "(" "COUNT" "(" "DISTINCT" Var ")" "AS" Var ")") "WHERE"? Group
//! Group    := "{" Pattern ("." Pattern)* "."? "}"
//! Pattern  := Term Term Term
//! Term     := Var | IRIREF | PrefixedName | "a" | Literal
//! ```
//!
//! At most [`MAX_PATTERNS`] patterns. Keywords are case-insensitive.

use std::fmt;

use super::term::{escape_literal, ns, Iri, PrefixMap, Term};
use crate::error::{Error, Result};

pub const MAX_PATTERNS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(String);

impl Variable {
    /// Name without the leading `?`; must match `[A-Za-z0-9_]+`.
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::Validation(format!("invalid variable name {name:?}")));
        }
        Ok(Variable(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternTerm {
    Var(Variable),
    Term(Term),
}

impl PatternTerm {
    pub fn var(&self) -> Option<&Variable> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Term(t)
    }
}

impl From<Iri> for PatternTerm {
    fn from(i: Iri) -> Self {
        PatternTerm::Term(Term::Iri(i))
    }
}

impl From<Variable> for PatternTerm {
    fn from(v: Variable) -> Self {
        PatternTerm::Var(v)
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(v) => write!(f, "{v}"),
            PatternTerm::Term(Term::Iri(i)) => write!(f, "<{}>", i.as_str()),
            PatternTerm::Term(Term::Literal(l)) => write!(f, "\"{}\"", escape_literal(l)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(s: impl Into<PatternTerm>, p: impl Into<PatternTerm>, o: impl Into<PatternTerm>) -> Self {
        TriplePattern { subject: s.into(), predicate: p.into(), object: o.into() }
    }

    pub fn positions(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.positions().into_iter().filter_map(PatternTerm::var)
    }

    pub fn is_ground(&self) -> bool {
        self.variables().next().is_none()
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryForm {
    Ask,
    SelectDistinct(Variable),
    /// `SELECT (COUNT(DISTINCT ?var) AS ?alias)`
    Count { var: Variable, alias: Variable },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub form: QueryForm,
    pub patterns: Vec<TriplePattern>,
    pub prefixes: PrefixMap,
}

impl Query {
    /// Checked constructor enforcing the subset's structural invariants.
    pub fn new(form: QueryForm, patterns: Vec<TriplePattern>, prefixes: PrefixMap) -> Result<Self> {
        let q = Query { form, patterns, prefixes };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.patterns.is_empty() {
            return Err(Error::Validation("query has no triple patterns".into()));
        }
        if self.patterns.len() > MAX_PATTERNS {
            return Err(Error::Validation(format!(
                "query has {} triple patterns, at most {MAX_PATTERNS} allowed",
                self.patterns.len()
            )));
        }
        for p in &self.patterns {
            if matches!(p.subject, PatternTerm::Term(Term::Literal(_))) || matches!(p.predicate, PatternTerm::Term(Term::Literal(_))) {
                return Err(Error::Validation(format!("literal in subject or predicate position: {p}")));
            }
        }
        if let Some(v) = self.projection() {
            if !self.patterns.iter().any(|p| p.variables().any(|x| x == v)) {
                return Err(Error::Validation(format!("projected variable {v} does not occur in any pattern")));
            }
        }
        Ok(())
    }

    pub fn projection(&self) -> Option<&Variable> {
        match &self.form {
            QueryForm::Ask => None,
            QueryForm::SelectDistinct(v) | QueryForm::Count { var: v, .. } => Some(v),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, iri) in &self.prefixes {
            writeln!(f, "PREFIX {p}: <{iri}>")?;
        }
        match &self.form {
            QueryForm::Ask => write!(f, "ASK WHERE {{ ")?,
            QueryForm::SelectDistinct(v) => write!(f, "SELECT DISTINCT {v} WHERE {{ ")?,
            QueryForm::Count { var, alias } => write!(f, "SELECT (COUNT(DISTINCT {var}) AS {alias}) WHERE {{ ")?,
        }
        for (i, p) in self.patterns.iter().enumerate() {
            if i > 0 {
                write!(f, " . ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, " }}")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    PName(String, String),
    IriRef(String),
    Var(String),
    Lit(String),
    Punct(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "{w}"),
            Tok::PName(p, l) => write!(f, "{p}:{l}"),
            Tok::IriRef(i) => write!(f, "<{i}>"),
            Tok::Var(v) => write!(f, "?{v}"),
            Tok::Lit(l) => write!(f, "\"{}\"", escape_literal(l)),
            Tok::Punct(c) => write!(f, "{c}"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let err = |m: String| Error::parse(None, m);
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    let is_name = |c: char| c.is_ascii_alphanumeric() || c == '_';
    let is_local = |c: char| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '/' | '%' | '.');
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if "{}().".contains(c) {
            out.push(Tok::Punct(c));
            i += 1;
        } else if c == '<' {
            let start = i + 1;
            let end = chars[start..].iter().position(|&c| c == '>').ok_or_else(|| err("unterminated IRI".into()))?;
            out.push(Tok::IriRef(chars[start..start + end].iter().collect()));
            i = start + end + 1;
        } else if c == '?' || c == '$' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && is_name(chars[j]) {
                j += 1;
            }
            if j == start {
                return Err(err(format!("empty variable name after `{c}`")));
            }
            out.push(Tok::Var(chars[start..j].iter().collect()));
            i = j;
        } else if c == '"' {
            let mut j = i + 1;
            let mut s = String::new();
            loop {
                match chars.get(j) {
                    None => return Err(err("unterminated literal".into())),
                    Some('"') => break,
                    Some('\\') => {
                        match chars.get(j + 1) {
                            Some('n') => s.push('\n'),
                            Some('r') => s.push('\r'),
                            Some('t') => s.push('\t'),
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            other => return Err(err(format!("unsupported escape {other:?}"))),
                        }
                        j += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        j += 1;
                    }
                }
            }
            out.push(Tok::Lit(s));
            i = j + 1;
        } else if is_name(c) || c == ':' {
            let start = i;
            while i < chars.len() && is_name(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if chars.get(i) == Some(&':') {
                i += 1;
                let ls = i;
                while i < chars.len() && is_local(chars[i]) {
                    i += 1;
                }
                // a trailing '.' terminates the pattern rather than the name
                while i > ls && chars[i - 1] == '.' {
                    i -= 1;
                }
                out.push(Tok::PName(word, chars[ls..i].iter().collect()));
            } else {
                out.push(Tok::Word(word));
            }
        } else {
            return Err(err(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    prefixes: PrefixMap,
}

const UNSUPPORTED: &[&str] = &[
    "FILTER", "OPTIONAL", "UNION", "MINUS", "GRAPH", "SERVICE", "BIND", "VALUES", "ORDER", "GROUP", "HAVING",
    "LIMIT", "OFFSET", "CONSTRUCT", "DESCRIBE", "FROM", "BASE", "REDUCED",
];

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn describe(t: Option<&Tok>) -> String {
        t.map(|t| format!("`{t}`")).unwrap_or_else(|| "end of input".into())
    }

    fn fail<T>(&self, what: &str) -> Result<T> {
        let t = self.peek();
        if let Some(Tok::Word(w)) = t {
            if UNSUPPORTED.contains(&w.to_ascii_uppercase().as_str()) {
                return Err(Error::parse(None, format!("unsupported clause `{w}`")));
            }
        }
        Err(Error::parse(None, format!("expected {what}, found {}", Self::describe(t))))
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w.eq_ignore_ascii_case(kw))
    }

    fn expect_kw(&mut self, kw: &str) -> Result<()> {
        if self.is_kw(kw) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(kw)
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&format!("`{c}`"))
        }
    }

    fn var(&mut self) -> Result<Variable> {
        match self.peek() {
            Some(Tok::Var(v)) => {
                let v = Variable::new(v.clone())?;
                self.pos += 1;
                Ok(v)
            }
            _ => self.fail("a variable"),
        }
    }

    fn term(&mut self) -> Result<PatternTerm> {
        let tok = self.peek().cloned();
        let t = match tok {
            Some(Tok::Var(v)) => PatternTerm::Var(Variable::new(v)?),
            Some(Tok::IriRef(i)) => PatternTerm::Term(Term::Iri(Iri::new(i)?)),
            Some(Tok::PName(p, local)) => {
                let base = self
                    .prefixes
                    .get(&p)
                    .ok_or_else(|| Error::parse(None, format!("unknown prefix `{p}:`")))?;
                PatternTerm::Term(Term::Iri(Iri::new(format!("{base}{local}"))?))
            }
            Some(Tok::Lit(l)) => PatternTerm::Term(Term::literal(l)),
            Some(Tok::Word(w)) if w == "a" => PatternTerm::Term(Term::Iri(Iri::new(ns::RDF_TYPE)?)),
            _ => return self.fail("a term (triple pattern needs subject, predicate and object)"),
        };
        self.pos += 1;
        Ok(t)
    }

    fn group(&mut self) -> Result<Vec<TriplePattern>> {
        self.expect_punct('{')?;
        let mut patterns = Vec::new();
        loop {
            if self.peek() == Some(&Tok::Punct('}')) && !patterns.is_empty() {
                self.pos += 1;
                break;
            }
            let s = self.term()?;
            let p = self.term()?;
            let o = self.term()?;
            patterns.push(TriplePattern { subject: s, predicate: p, object: o });
            if patterns.len() > MAX_PATTERNS {
                return Err(Error::parse(None, format!("too many triple patterns: more than {MAX_PATTERNS}")));
            }
            match self.peek() {
                Some(Tok::Punct('.')) => self.pos += 1,
                Some(Tok::Punct('}')) => {}
                _ => return self.fail("`.` or `}` after triple pattern"),
            }
        }
        Ok(patterns)
    }

    fn query(&mut self) -> Result<Query> {
        while self.is_kw("PREFIX") {
            self.pos += 1;
            let (name, local) = match self.next() {
                Some(Tok::PName(n, l)) => (n, l),
                t => return Err(Error::parse(None, format!("expected prefix name, found {}", Self::describe(t.as_ref())))),
            };
            if !local.is_empty() {
                return Err(Error::parse(None, format!("malformed prefix declaration `{name}:{local}`")));
            }
            let iri = match self.next() {
                Some(Tok::IriRef(i)) => Iri::new(i)?,
                t => return Err(Error::parse(None, format!("expected <iri> after PREFIX, found {}", Self::describe(t.as_ref())))),
            };
            self.prefixes.insert(name, iri.as_str().to_string());
        }
        let form = if self.is_kw("ASK") {
            self.pos += 1;
            QueryForm::Ask
        } else if self.is_kw("SELECT") {
            self.pos += 1;
            if self.is_kw("DISTINCT") {
                self.pos += 1;
                QueryForm::SelectDistinct(self.var()?)
            } else if self.peek() == Some(&Tok::Punct('(')) {
                self.pos += 1;
                self.expect_kw("COUNT")?;
                self.expect_punct('(')?;
                self.expect_kw("DISTINCT")?;
                let var = self.var()?;
                self.expect_punct(')')?;
                self.expect_kw("AS")?;
                let alias = self.var()?;
                self.expect_punct(')')?;
                QueryForm::Count { var, alias }
            } else {
                return self.fail("DISTINCT or (COUNT(DISTINCT ?v) AS ?c)");
            }
        } else {
            return self.fail("ASK or SELECT");
        };
        if self.is_kw("WHERE") {
            self.pos += 1;
        }
        let patterns = self.group()?;
        if self.peek().is_some() {
            return self.fail("end of query");
        }
        let prefixes = std::mem::take(&mut self.prefixes);
        Query::new(form, patterns, prefixes)
    }
}

/// Parse query text; prefixed names are expanded to full IRIs in the AST.
pub fn parse_sparql(text: &str) -> Result<Query> {
    let toks = lex(text)?;
    Parser { toks, pos: 0, prefixes: PrefixMap::new() }.query()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ask_single_pattern() {
        let q = parse_sparql("ASK WHERE { <a> <b> <c> }").unwrap();
        assert_eq!(q.form, QueryForm::Ask);
        assert_eq!(q.patterns.len(), 1);
    }

    #[test]
    fn count_form() {
        let q = parse_sparql("SELECT (COUNT(DISTINCT ?x) AS ?c) WHERE { ?x <p> <o> }").unwrap();
        assert_eq!(q.form, QueryForm::Count { var: Variable::new("x").unwrap(), alias: Variable::new("c").unwrap() });
    }

    #[test]
    fn short_pattern_is_an_arity_error() {
        let err = parse_sparql("SELECT DISTINCT ?x WHERE { ?x ?y }").unwrap_err().to_string();
        assert!(err.contains("`}`"), "{err}");
    }

    #[test]
    fn prefixes_expand() {
        let q = parse_sparql(
            "PREFIX avi: <http://aeroqa.example/kg/>\nSELECT DISTINCT ?x WHERE { avi:acc/A1 avi:rel/isCausedByAircraftIssue ?x . }",
        )
        .unwrap();
        assert_eq!(
            q.patterns[0].subject,
            PatternTerm::Term(Term::iri("http://aeroqa.example/kg/acc/A1").unwrap())
        );
    }

    #[test]
    fn error_cases_name_the_token() {
        let e = parse_sparql("SELECT DISTINCT ?x WHERE { ?x foo:p ?y }").unwrap_err().to_string();
        assert!(e.contains("foo:"), "{e}");
        let five = "ASK { <a> <b> <c> . <a> <b> <c> . <a> <b> <c> . <a> <b> <c> . <a> <b> <c> }";
        assert!(parse_sparql(five).unwrap_err().to_string().contains("too many"));
        let e = parse_sparql("SELECT DISTINCT ?x WHERE { ?x <p> ?y } LIMIT 3").unwrap_err().to_string();
        assert!(e.contains("LIMIT"), "{e}");
        let e = parse_sparql("SELECT DISTINCT ?x WHERE { ?x <p> ?y FILTER }").unwrap_err().to_string();
        assert!(e.contains("FILTER"), "{e}");
        assert!(parse_sparql("SELECT (COUNT(?x) AS ?c) WHERE { ?x <p> ?y }").is_err());
        assert!(parse_sparql("SELECT DISTINCT ?z WHERE { ?x <p> ?y }").is_err());
        assert!(parse_sparql("ASK { }").is_err());
    }

    #[test]
    fn display_reparses() {
        let text = "PREFIX avi: <http://aeroqa.example/kg/>\nSELECT (COUNT(DISTINCT ?x) AS ?count) WHERE { ?x <http://p> \"lit \\\"q\\\"\" . ?x a <http://c> }";
        let q = parse_sparql(text).unwrap();
        let again = parse_sparql(&q.to_string()).unwrap();
        assert_eq!(q, again);
    }
}
