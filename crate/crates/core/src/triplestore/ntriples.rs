//! Line-oriented persistence: one `<s> <p> <o> .` triple per line, objects
//! either `<iri>` or `"literal"`, `#` comments, UTF-8 with LF endings.

use super::graph::Graph;
use super::term::{escape_literal, Iri, Term, Triple};
use crate::error::{Error, Result};

pub fn parse_ntlines(text: &str) -> Result<Graph> {
    let mut g = Graph::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        g.insert(parse_line(line).map_err(|m| Error::parse(idx + 1, m))?);
    }
    Ok(g)
}

/// Sorted, newline-terminated lines; the same graph always yields the same bytes.
pub fn serialize(graph: &Graph) -> String {
    let mut lines: Vec<String> = graph.iter().map(|t| format_triple(&t)).collect();
    lines.sort();
    let mut out = String::new();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

fn format_triple(t: &Triple) -> String {
    let obj = match &t.object {
        Term::Iri(i) => format!("<{}>", i.as_str()),
        Term::Literal(l) => format!("\"{}\"", escape_literal(l)),
    };
    format!("<{}> <{}> {} .", t.subject.as_str(), t.predicate.as_str(), obj)
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.s[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn iri(&mut self) -> Result<Iri, String> {
        self.skip_ws();
        if self.peek() != Some('<') {
            return Err(format!("expected '<' at column {}", self.pos + 1));
        }
        let rest = &self.s[self.pos + 1..];
        let end = rest.find('>').ok_or_else(|| "unterminated IRI".to_string())?;
        let iri = Iri::new(&rest[..end]).map_err(|e| e.to_string())?;
        self.pos += end + 2;
        Ok(iri)
    }

    fn literal(&mut self) -> Result<String, String> {
        // caller has seen the opening quote
        self.pos += 1;
        let mut out = String::new();
        let mut chars = self.s[self.pos..].char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos += i + 1;
                    return Ok(out);
                }
                '\\' => {
                    let (_, e) = chars.next().ok_or("dangling escape")?;
                    match e {
                        'n' => out.push('\n'),
                        'r' => out.push('\r'),
                        't' => out.push('\t'),
                        '"' => out.push('"'),
                        '\\' => out.push('\\'),
                        'u' | 'U' => {
                            let n = if e == 'u' { 4 } else { 8 };
                            let hex: String = (0..n).filter_map(|_| chars.next().map(|(_, h)| h)).collect();
                            let cp = u32::from_str_radix(&hex, 16).map_err(|_| format!("bad \\{e} escape"))?;
                            out.push(char::from_u32(cp).ok_or("escape is not a scalar value")?);
                        }
                        other => return Err(format!("unknown escape \\{other}")),
                    }
                }
                c => out.push(c),
            }
        }
        Err("unterminated literal".into())
    }
}

fn parse_line(line: &str) -> Result<Triple, String> {
    let mut c = Cursor { s: line, pos: 0 };
    let s = c.iri()?;
    let p = c.iri()?;
    c.skip_ws();
    let o = match c.peek() {
        Some('<') => Term::Iri(c.iri()?),
        Some('"') => Term::literal(c.literal()?),
        Some(ch) => return Err(format!("unexpected {ch:?} in object position")),
        None => return Err("missing object".into()),
    };
    c.skip_ws();
    if c.peek() != Some('.') {
        return Err("expected terminating '.'".into());
    }
    c.pos += 1;
    c.skip_ws();
    match c.peek() {
        None | Some('#') => Ok(Triple::from_iris(s, p, o)),
        Some(ch) => Err(format!("trailing content starting at {ch:?}")),
    }
}
