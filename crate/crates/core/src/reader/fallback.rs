use super::ReaderAnswer;
use crate::ingest::Passage;
use crate::text::{is_stopword, jaccard, term_set, tokenize};

pub const DEFAULT_PER_PASSAGE: usize = 2;
const MAX_WINDOW: usize = 2;

/// Byte ranges of sentences: a `.`, `!` or `?` ends a sentence when followed
/// by whitespace and then an uppercase letter or digit, or by the end of text.
pub fn split_sentences(text: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    for (i, &(pos, c)) in chars.iter().enumerate() {
        if !matches!(c, '.' | '!' | '?') {
            continue;
        }
        let end = pos + c.len_utf8();
        let mut j = i + 1;
        while j < chars.len() && chars[j].1.is_whitespace() {
            j += 1;
        }
        let boundary = j == chars.len() || (j > i + 1 && (chars[j].1.is_uppercase() || chars[j].1.is_ascii_digit()));
        if boundary {
            if !text[start..end].trim().is_empty() {
                out.push(trimmed(text, start, end));
            }
            start = if j < chars.len() { chars[j].0 } else { text.len() };
        }
    }
    if start < text.len() && !text[start..].trim().is_empty() {
        out.push(trimmed(text, start, text.len()));
    }
    out
}

fn trimmed(text: &str, start: usize, end: usize) -> (usize, usize) {
    let s = &text[start..end];
    let lead = s.len() - s.trim_start().len();
    let trail = s.len() - s.trim_end().len();
    (start + lead, end - trail)
}

/// Narrows a span to run from its first to its last content word.
fn trim_stopwords(text: &str, start: usize, end: usize) -> Option<(usize, usize)> {
    let toks = tokenize(&text[start..end]);
    let first = toks.iter().find(|t| !is_stopword(t.text))?;
    let last = toks.iter().rev().find(|t| !is_stopword(t.text))?;
    Some((start + first.start, start + last.end))
}

#[derive(Debug, Clone)]
struct Window {
    sentences: (usize, usize),
    span: (usize, usize),
    score: f64,
}

/// Deterministic extractive reader. Every window of one or two consecutive
/// sentences is scored by Jaccard overlap with the question's content terms
/// and trimmed of leading and trailing stopwords. Each passage contributes
/// its `per_passage` best non-overlapping windows; the answers are then sorted
/// by score, ties by passage order and position.
pub fn read_extractive_fallback(q: &str, passages: &[Passage], per_passage: usize) -> Vec<ReaderAnswer> {
    let qs = term_set(q);
    let mut out: Vec<(ReaderAnswer, usize)> = Vec::new();
    for (pi, p) in passages.iter().enumerate() {
        let sents = split_sentences(&p.text);
        let mut windows = Vec::new();
        for i in 0..sents.len() {
            for w in 1..=MAX_WINDOW.min(sents.len() - i) {
                let (s, e) = (sents[i].0, sents[i + w - 1].1);
                let Some(span) = trim_stopwords(&p.text, s, e) else { continue };
                let score = jaccard(&qs, &term_set(&p.text[span.0..span.1]));
                windows.push(Window { sentences: (i, i + w), span, score });
            }
        }
        windows.sort_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then((a.sentences.1 - a.sentences.0).cmp(&(b.sentences.1 - b.sentences.0)))
                .then(a.sentences.0.cmp(&b.sentences.0))
        });
        let mut chosen: Vec<&Window> = Vec::new();
        for w in &windows {
            if chosen.len() == per_passage {
                break;
            }
            if chosen.iter().all(|c| c.sentences.1 <= w.sentences.0 || w.sentences.1 <= c.sentences.0) {
                chosen.push(w);
            }
        }
        for w in chosen {
            let answer = ReaderAnswer { text: p.text[w.span.0..w.span.1].to_string(), passage_index: pi, score: w.score };
            out.push((answer, w.span.0));
        }
    }
    out.sort_by(|(a, pa), (b, pb)| {
        b.score.total_cmp(&a.score).then(a.passage_index.cmp(&b.passage_index)).then(pa.cmp(pb))
    });
    out.into_iter().map(|(a, _)| a).collect()
}
