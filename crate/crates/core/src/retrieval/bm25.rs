use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{top_k, ScoredPassage};
use crate::error::{Error, Result};
use crate::ingest::Passage;
use crate::text::terms;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params { k1: 1.2, b: 0.75 }
    }
}

impl Bm25Params {
    pub fn new(k1: f64, b: f64) -> Result<Self> {
        if !(k1 > 0.0 && k1.is_finite()) || !(0.0..=1.0).contains(&b) {
            return Err(Error::Validation(format!("BM25 needs k1 > 0 and b in [0, 1], got k1={k1}, b={b}")));
        }
        Ok(Bm25Params { k1, b })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub passage: usize,
    pub tf: u32,
}

/// Inverted index over passage text (headings are not indexed).
#[derive(Debug, Clone, Default)]
pub struct PassageIndex {
    passages: Vec<Passage>,
    postings: HashMap<String, Vec<Posting>>,
    doc_lengths: Vec<usize>,
    avgdl: f64,
}

impl PassageIndex {
    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn len(&self) -> usize {
        self.passages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.passages.is_empty()
    }

    pub fn avgdl(&self) -> f64 {
        self.avgdl
    }

    pub fn doc_length(&self, passage: usize) -> Option<usize> {
        self.doc_lengths.get(passage).copied()
    }

    /// Postings for an already normalized term, in passage order.
    pub fn postings(&self, term: &str) -> &[Posting] {
        self.postings.get(term).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn df(&self, term: &str) -> usize {
        self.postings(term).len()
    }

    pub fn idf(&self, term: &str) -> f64 {
        let n = self.passages.len() as f64;
        let df = self.df(term) as f64;
        ((n - df + 0.5) / (df + 0.5) + 1.0).ln()
    }

    fn tf(&self, term: &str, passage: usize) -> u32 {
        let ps = self.postings(term);
        ps.binary_search_by_key(&passage, |p| p.passage).map(|i| ps[i].tf).unwrap_or(0)
    }
}

pub fn build_index(passages: Vec<Passage>) -> PassageIndex {
    let mut postings: HashMap<String, Vec<Posting>> = HashMap::new();
    let mut doc_lengths = Vec::with_capacity(passages.len());
    for (i, p) in passages.iter().enumerate() {
        let toks = terms(&p.text);
        doc_lengths.push(toks.len());
        let mut tf: HashMap<String, u32> = HashMap::new();
        for t in toks {
            *tf.entry(t).or_default() += 1;
        }
        for (t, c) in tf {
            postings.entry(t).or_default().push(Posting { passage: i, tf: c });
        }
    }
    let avgdl = if doc_lengths.is_empty() {
        0.0
    } else {
        doc_lengths.iter().sum::<usize>() as f64 / doc_lengths.len() as f64
    };
    PassageIndex { passages, postings, doc_lengths, avgdl }
}

/// Okapi BM25 of one indexed passage for already normalized query terms,
/// summed over every query token (repeats count again).
pub fn bm25_score(index: &PassageIndex, q_tokens: &[String], passage: usize, params: Bm25Params) -> Result<f64> {
    let dl = index
        .doc_length(passage)
        .ok_or_else(|| Error::Validation(format!("passage {passage} is not in the index of {}", index.len())))? as f64;
    let norm = if index.avgdl > 0.0 { dl / index.avgdl } else { 0.0 };
    let mut score = 0.0;
    for t in q_tokens {
        let tf = index.tf(t, passage) as f64;
        if tf == 0.0 {
            continue;
        }
        score += index.idf(t) * tf * (params.k1 + 1.0) / (tf + params.k1 * (1.0 - params.b + params.b * norm));
    }
    Ok(score)
}

/// Scores every passage and keeps the best `k`; ties keep insertion order.
pub fn retrieve_bm25(index: &PassageIndex, q: &str, k: usize, params: Bm25Params) -> Vec<ScoredPassage> {
    let q_tokens = terms(q);
    let scores = (0..index.len())
        .map(|i| bm25_score(index, &q_tokens, i, params).expect("index in range"))
        .collect();
    top_k(&index.passages, scores, k)
}
