//! Shared text preprocessing: tokenization, stopword removal and a light
//! suffix-stripping lemmatizer.
//!
//! Every component that compares words (term extraction, keyword mapping,
//! BM25, triple ranking, the fallback reader) goes through [`terms`] so that
//! the same surface form always normalizes to the same key.

use std::collections::HashSet;
use std::sync::OnceLock;

/// A raw token with its byte span in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub start: usize,
    pub end: usize,
}

const STOPWORDS: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
    "are", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
    "but", "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each", "few",
    "for", "from", "further", "give", "had", "has", "have", "having", "he", "her", "here",
    "hers", "herself", "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it",
    "its", "itself", "just", "list", "many", "me", "more", "most", "much", "my", "myself",
    "name", "no", "nor", "not", "now", "of", "off", "on", "once", "only", "or", "other", "our",
    "ours", "out", "over", "own", "same", "she", "should", "show", "so", "some", "such", "tell",
    "than", "that", "the", "their", "theirs", "them", "then", "there", "these", "they", "this",
    "those", "through", "to", "too", "under", "until", "up", "very", "was", "we", "were",
    "what", "when", "where", "which", "while", "who", "whom", "whose", "why", "will", "with",
    "would", "you", "your", "yours",
];

fn stopword_set() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| STOPWORDS.iter().copied().collect())
}

/// True if the lowercased word is in the bundled English stopword list.
pub fn is_stopword(word: &str) -> bool {
    stopword_set().contains(word.to_lowercase().as_str())
}

/// Split on every non-alphanumeric character, keeping byte offsets.
pub fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_alphanumeric() {
            if start.is_none() {
                start = Some(i);
            }
        } else if let Some(s) = start.take() {
            out.push(Token { text: &text[s..i], start: s, end: i });
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &text[s..], start: s, end: text.len() });
    }
    out
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u' | b'y')
}

/// Light lemmatizer: plural `-s`, `-ing` and `-ed` stripping plus a final
/// silent `e`, so that "caused", "causes" and "cause" share one key.
/// Input is expected lowercased; non-ASCII words pass through.
pub fn lemmatize(word: &str) -> String {
    if word.len() <= 3 || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return word.to_string();
    }
    let mut w = word.to_string();

    if w.ends_with("sses") {
        w.truncate(w.len() - 2);
    } else if w.ends_with("ies") && w.len() > 4 {
        w.truncate(w.len() - 3);
        w.push('y');
    } else if w.ends_with("ss") || w.ends_with("us") || w.ends_with("is") {
    } else if w.ends_with('s') {
        w.truncate(w.len() - 1);
    }

    let strip = if w.ends_with("ing") {
        3
    } else if w.ends_with("ed") && !w.ends_with("eed") {
        2
    } else {
        0
    };
    if strip > 0 {
        let stem = &w.as_bytes()[..w.len() - strip];
        if stem.len() >= 3 && stem.iter().copied().any(is_vowel) {
            w.truncate(w.len() - strip);
            let b = w.as_bytes();
            let n = b.len();
            if n >= 2 && b[n - 1] == b[n - 2] && !is_vowel(b[n - 1]) && !matches!(b[n - 1], b'l' | b's' | b'z') {
                w.truncate(n - 1);
            }
        }
    }

    if w.len() > 4 && w.ends_with('e') && !w.ends_with("ee") {
        w.truncate(w.len() - 1);
    }
    w
}

/// Normalized content terms: lowercase, stopwords dropped, lemmatized.
pub fn terms(text: &str) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .filter_map(|t| {
            let lower = t.text.to_lowercase();
            if stopword_set().contains(lower.as_str()) {
                None
            } else {
                Some(lemmatize(&lower))
            }
        })
        .collect()
}

/// Set of normalized content terms.
pub fn term_set(text: &str) -> HashSet<String> {
    terms(text).into_iter().collect()
}

/// Jaccard overlap of two sets; 0 when both are empty.
pub fn jaccard<T: Eq + std::hash::Hash>(a: &HashSet<T>, b: &HashSet<T>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

/// Split `camelCase`/`PascalCase` identifiers and `_`/`-` separators into
/// lowercase words: `isCausedByAircraftIssue` → "is caused by aircraft issue".
pub fn split_identifier(ident: &str) -> String {
    let mut words: Vec<String> = Vec::new();
    let mut cur = String::new();
    let mut prev_lower = false;
    for c in ident.chars() {
        if c == '_' || c == '-' || c.is_whitespace() {
            if !cur.is_empty() {
                words.push(std::mem::take(&mut cur));
            }
            prev_lower = false;
            continue;
        }
        if c.is_uppercase() && prev_lower && !cur.is_empty() {
            words.push(std::mem::take(&mut cur));
        }
        prev_lower = c.is_lowercase() || c.is_ascii_digit();
        cur.extend(c.to_lowercase());
    }
    if !cur.is_empty() {
        words.push(cur);
    }
    words.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_keeps_offsets() {
        let text = "Directional control - Not attained.";
        let toks = tokenize(text);
        let words: Vec<_> = toks.iter().map(|t| t.text).collect();
        assert_eq!(words, ["Directional", "control", "Not", "attained"]);
        for t in &toks {
            assert_eq!(&text[t.start..t.end], t.text);
        }
    }

    #[test]
    fn lemmatizer_unifies_inflections() {
        for (a, b) in [
            ("caused", "cause"),
            ("causes", "cause"),
            ("operated", "operate"),
            ("landing", "landed"),
            ("dragged", "drag"),
            ("manufactured", "manufacture"),
            ("accidents", "accident"),
        ] {
            assert_eq!(lemmatize(a), lemmatize(b), "{a} vs {b}");
        }
        assert_eq!(lemmatize("gear"), "gear");
        assert_eq!(lemmatize("speed"), "speed");
        assert_eq!(lemmatize("loss"), "loss");
    }

    #[test]
    fn terms_drop_stopwords() {
        assert_eq!(terms("Was it raining"), ["rain"]);
        assert_eq!(terms("The landing gear"), ["land", "gear"]);
    }

    #[test]
    fn identifier_split() {
        assert_eq!(split_identifier("isCausedByAircraftIssue"), "is caused by aircraft issue");
        assert_eq!(split_identifier("operatedBy"), "operated by");
        assert_eq!(split_identifier("Directional_control"), "directional control");
    }

    #[test]
    fn jaccard_bounds() {
        let a: HashSet<_> = ["x", "y"].into_iter().collect();
        let b: HashSet<_> = ["y", "z"].into_iter().collect();
        assert!((jaccard(&a, &b) - 1.0 / 3.0).abs() < 1e-12);
        let e: HashSet<&str> = HashSet::new();
        assert_eq!(jaccard(&e, &e), 0.0);
    }
}
