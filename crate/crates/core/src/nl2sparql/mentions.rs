use std::collections::HashSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{is_stopword, lemmatize, tokenize};

pub const MAX_NGRAM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MentionKind {
    EntityLike,
    RelationLike,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mention {
    /// Question text from the first to the last token of the span.
    pub surface: String,
    /// Token indices `[start, end)` over all question tokens, stopwords included.
    pub span: (usize, usize),
    pub kind_hint: MentionKind,
}

impl Mention {
    pub fn len(&self) -> usize {
        self.span.1 - self.span.0
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn overlaps(&self, other: &Mention) -> bool {
        self.span.0 < other.span.1 && other.span.0 < self.span.1
    }

    pub fn contains(&self, other: &Mention) -> bool {
        self.span.0 <= other.span.0 && other.span.1 <= self.span.1
    }
}

// Stands in for a PoS tagger: verbs and nouns that name relations.
const RELATION_WORDS: &[&str] = &[
    "involve", "operate", "operator", "manufacture", "manufacturer", "make", "maker", "build", "cause",
    "reason", "occur", "happen", "fly", "land", "crash", "damage", "injure", "own", "owner", "report",
    "record", "lose", "fail", "collapse", "strike", "hit", "locate", "location", "result", "lead",
    "contribute", "experience", "event", "year", "model", "injury", "severity",
];

fn relation_lemmas() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| RELATION_WORDS.iter().map(|w| lemmatize(w)).collect())
}

fn is_relational(word: &str) -> bool {
    let lower = word.to_lowercase();
    // past participles ("operated by", "caused by") mostly introduce relations
    (lower.len() > 4 && lower.ends_with("ed")) || relation_lemmas().contains(&lemmatize(&lower))
}

fn is_name_like(word: &str, first: bool) -> bool {
    let has_digit = word.chars().any(|c| c.is_ascii_digit());
    // the question-initial word is capitalized by grammar, not because it is a name
    let capitalized = word.chars().next().is_some_and(char::is_uppercase) && (!first || word.len() > 1 && word.chars().all(|c| !c.is_lowercase()));
    has_digit || capitalized
}

/// Candidate mentions of a question.
///
/// Maximal runs of capitalized or digit-bearing content words, adjacent
/// except for whitespace, become single entity mentions. The remaining
/// content words are grouped into stopword-free segments, and every 1- to
/// 4-gram of each segment is a candidate. An n-gram containing a relational
/// word is relation-like, otherwise entity-like. Candidates overlap; overlaps
/// are settled after linking by [`super::resolve_mentions`].
pub fn extract_mentions(q: &str) -> Result<Vec<Mention>> {
    let toks = tokenize(q);
    let content: Vec<bool> = toks.iter().map(|t| !is_stopword(t.text)).collect();
    if !content.iter().any(|&c| c) {
        return Err(Error::NoMention(q.to_string()));
    }
    let surface = |s: usize, e: usize| q[toks[s].start..toks[e - 1].end].to_string();
    let adjacent = |i: usize| q[toks[i - 1].end..toks[i].start].trim().is_empty();

    let mut out = Vec::new();
    let mut in_name = vec![false; toks.len()];
    let mut i = 0;
    while i < toks.len() {
        if content[i] && is_name_like(toks[i].text, i == 0) {
            let mut j = i + 1;
            while j < toks.len() && content[j] && is_name_like(toks[j].text, false) && adjacent(j) {
                j += 1;
            }
            in_name[i..j].iter_mut().for_each(|f| *f = true);
            out.push(Mention { surface: surface(i, j), span: (i, j), kind_hint: MentionKind::EntityLike });
            i = j;
        } else {
            i += 1;
        }
    }

    let mut i = 0;
    while i < toks.len() {
        if !content[i] || in_name[i] {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < toks.len() && content[j] && !in_name[j] {
            j += 1;
        }
        for s in i..j {
            for e in s + 1..=j.min(s + MAX_NGRAM) {
                let kind = if toks[s..e].iter().any(|t| is_relational(t.text)) {
                    MentionKind::RelationLike
                } else {
                    MentionKind::EntityLike
                };
                out.push(Mention { surface: surface(s, e), span: (s, e), kind_hint: kind });
            }
        }
        i = j;
    }
    out.sort_by_key(|m| (m.span.0, m.span.1));
    Ok(out)
}
