use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermScore {
    pub term: Vec<String>,
    pub score: f64,
    /// Occurrences across the whole corpus.
    pub frequency: usize,
}

impl TermScore {
    pub fn text(&self) -> String {
        self.term.join(" ")
    }
}

fn rank(mut v: Vec<TermScore>) -> Vec<TermScore> {
    v.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| b.frequency.cmp(&a.frequency))
            .then_with(|| a.term.cmp(&b.term))
    });
    v
}

/// tf(t,d)·ln(N/df(t)) with raw counts; each term keeps its best document score.
pub fn tfidf(corpus: &[Vec<String>]) -> Result<Vec<TermScore>> {
    if corpus.is_empty() {
        return Err(Error::Validation("tf-idf needs at least one document".into()));
    }
    let n = corpus.len() as f64;
    let mut df: HashMap<&str, usize> = HashMap::new();
    let mut freq: HashMap<&str, usize> = HashMap::new();
    let mut per_doc: Vec<HashMap<&str, usize>> = Vec::with_capacity(corpus.len());
    for doc in corpus {
        let mut tf: HashMap<&str, usize> = HashMap::new();
        for t in doc {
            *tf.entry(t).or_default() += 1;
            *freq.entry(t).or_default() += 1;
        }
        for t in tf.keys() {
            *df.entry(t).or_default() += 1;
        }
        per_doc.push(tf);
    }
    let mut best: HashMap<&str, f64> = HashMap::new();
    for tf in &per_doc {
        for (t, &c) in tf {
            let s = c as f64 * (n / df[t] as f64).ln();
            let e = best.entry(t).or_insert(s);
            *e = e.max(s);
        }
    }
    Ok(rank(
        best.into_iter()
            .map(|(t, score)| TermScore { term: vec![t.to_string()], score, frequency: freq[t] })
            .collect(),
    ))
}

/// C-value over contiguous n-grams with 2 ≤ n ≤ `max_n`:
/// log2|a|·f(a) for a term never nested in a longer candidate, otherwise
/// log2|a|·(f(a) − mean f(b)) over the longer candidates b containing a.
pub fn cvalue(corpus: &[Vec<String>], max_n: usize) -> Result<Vec<TermScore>> {
    if max_n < 2 {
        return Err(Error::Validation(format!("C-value needs max_n >= 2, got {max_n}")));
    }
    let mut freq: HashMap<&[String], usize> = HashMap::new();
    for doc in corpus {
        for n in 2..=max_n.min(doc.len()) {
            for w in doc.windows(n) {
                *freq.entry(w).or_default() += 1;
            }
        }
    }
    // longer candidates containing each candidate
    let mut containers: HashMap<&[String], HashSet<&[String]>> = HashMap::new();
    for &b in freq.keys() {
        for n in 2..b.len() {
            for a in b.windows(n) {
                containers.entry(a).or_default().insert(b);
            }
        }
    }
    let scored = freq
        .iter()
        .map(|(&a, &fa)| {
            let len = (a.len() as f64).log2();
            let score = match containers.get(a) {
                None => len * fa as f64,
                Some(ts) => {
                    let sum: usize = ts.iter().map(|b| freq[b]).sum();
                    len * (fa as f64 - sum as f64 / ts.len() as f64)
                }
            };
            TermScore { term: a.to_vec(), score, frequency: fa }
        })
        .collect();
    Ok(rank(scored))
}
