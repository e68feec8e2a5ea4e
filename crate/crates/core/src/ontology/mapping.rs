use serde::{Deserialize, Serialize};

use super::taxonomy::{RootToLeafPath, TaxonomyTree};
use crate::embeddings::{euclidean, EmbeddingProvider};
use crate::error::{Error, Result};
use crate::text::{jaccard, term_set};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MappingMethod {
    EmbeddingDistance,
    KeywordMatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappingResult {
    pub event: String,
    pub path: RootToLeafPath,
    /// Euclidean distance for embedding mapping, Jaccard overlap for keywords.
    pub score: f64,
    pub method: MappingMethod,
}

/// Nearest path by Euclidean distance between the event embedding and the
/// embedding of each rendered path. Ties go to the lexicographically smaller
/// rendering, so the result does not depend on the order of `paths`.
pub fn map_event_embedding(event: &str, paths: &[RootToLeafPath], provider: &EmbeddingProvider) -> Result<MappingResult> {
    if paths.is_empty() {
        return Err(Error::Validation("no taxonomy paths to map onto".into()));
    }
    let mut texts = vec![event.to_string()];
    texts.extend(paths.iter().map(RootToLeafPath::render));
    let vectors = provider.embed_batch(&texts)?;
    let (ev, pv) = vectors.split_first().expect("event vector present");
    let mut best: Option<(f64, &str, &RootToLeafPath)> = None;
    for ((path, rendered), v) in paths.iter().zip(&texts[1..]).zip(pv) {
        let d = euclidean(ev, v)?;
        let better = match best {
            None => true,
            Some((bd, br, _)) => d.total_cmp(&bd).then_with(|| rendered.as_str().cmp(br)).is_lt(),
        };
        if better {
            best = Some((d, rendered, path));
        }
    }
    let (score, _, path) = best.expect("paths non-empty");
    Ok(MappingResult { event: event.to_string(), path: path.clone(), score, method: MappingMethod::EmbeddingDistance })
}

/// Scores every node by Jaccard overlap between the event's terms and the node
/// label's terms. An internal winner resolves to its best-scoring descendant
/// leaf (first listed on ties). Ties between candidate paths go to the
/// lexicographically smaller rendering.
pub fn map_event_keywords(event: &str, tree: &TaxonomyTree) -> Result<MappingResult> {
    let ev = term_set(event);
    if ev.is_empty() {
        return Err(Error::NoMention(format!("event `{event}` has no content words")));
    }
    let scores: Vec<f64> = (0..tree.len()).map(|id| jaccard(&ev, &term_set(&tree.node(id).label))).collect();
    let mut best: Option<(f64, RootToLeafPath)> = None;
    for id in tree.preorder() {
        let leaves = tree.leaves_under(id);
        let mut leaf = leaves[0];
        for &l in &leaves[1..] {
            if scores[l] > scores[leaf] {
                leaf = l;
            }
        }
        let (score, path) = (scores[id], tree.path_to(leaf));
        let better = match &best {
            None => true,
            Some((b, bp)) => score > *b || (score == *b && path.render() < bp.render()),
        };
        if better {
            best = Some((score, path));
        }
    }
    let (score, path) = best.expect("tree non-empty");
    Ok(MappingResult { event: event.to_string(), path, score, method: MappingMethod::KeywordMatch })
}
