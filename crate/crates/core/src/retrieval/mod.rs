//! Passage retrieval: a BM25 inverted index and exhaustive dense scoring.

mod bm25;
mod dense;

use serde::{Deserialize, Serialize};

use crate::ingest::Passage;

pub use bm25::{bm25_score, build_index, retrieve_bm25, Bm25Params, PassageIndex, Posting};
pub use dense::{retrieve_dense, DenseIndex};

pub const DEFAULT_K: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredPassage {
    pub passage: Passage,
    /// Position of the passage in the indexed list.
    pub index: usize,
    pub score: f64,
    /// 1-based.
    pub rank: usize,
}

/// Sorts by score descending, ties by insertion order, keeps the first `k`.
pub(crate) fn top_k(passages: &[Passage], scores: Vec<f64>, k: usize) -> Vec<ScoredPassage> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(r, i)| ScoredPassage { passage: passages[i].clone(), index: i, score: scores[i], rank: r + 1 })
        .collect()
}
