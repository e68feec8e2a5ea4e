use std::collections::BTreeSet;

use crate::embeddings::{cosine, EmbeddingProvider};
use crate::error::{Error, Result};

/// Predictions beyond this rank are never scored, and recall denominators
/// never exceed it.
pub const TOP_N: usize = 10;
pub const DEFAULT_TAU: f64 = 0.8;

fn gold_set(gold: &[impl AsRef<str>]) -> BTreeSet<&str> {
    gold.iter().map(|g| g.as_ref().trim()).collect()
}

fn top(preds: &[impl AsRef<str>]) -> impl Iterator<Item = &str> {
    preds.iter().take(TOP_N).map(|p| p.as_ref().trim())
}

/// 1 if the first prediction equals some gold answer byte for byte after
/// trimming outer whitespace.
pub fn exact_match(preds: &[impl AsRef<str>], gold: &[impl AsRef<str>]) -> f64 {
    match preds.first() {
        Some(p) if gold_set(gold).contains(p.as_ref().trim()) => 1.0,
        _ => 0.0,
    }
}

/// Fraction of distinct gold answers found exactly among the top predictions.
pub fn exact_recall(preds: &[impl AsRef<str>], gold: &[impl AsRef<str>]) -> f64 {
    let gold = gold_set(gold);
    if gold.is_empty() {
        return 0.0;
    }
    let preds: BTreeSet<&str> = top(preds).collect();
    let hits = gold.iter().filter(|g| preds.contains(*g)).count();
    let denom = gold.len().min(TOP_N);
    hits.min(denom) as f64 / denom as f64
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::Config(format!("tau must be in (0, 1], got {tau}")));
    }
    Ok(())
}

/// `matched[g]` is true when gold entry `g` has some prediction within `tau`.
fn semantic_hits(preds: &[impl AsRef<str>], gold: &BTreeSet<&str>, provider: &EmbeddingProvider, tau: f64) -> Result<Vec<bool>> {
    check_tau(tau)?;
    let preds: Vec<&str> = top(preds).collect();
    if preds.is_empty() || gold.is_empty() {
        return Ok(vec![false; gold.len()]);
    }
    let pv = provider.embed_batch(&preds)?;
    let gold: Vec<&str> = gold.iter().copied().collect();
    let gv = provider.embed_batch(&gold)?;
    gold.iter()
        .zip(&gv)
        .map(|(g, g_vec)| {
            // identical strings count even when their vector is zero
            if preds.contains(g) {
                return Ok(true);
            }
            for p in &pv {
                if cosine(p, g_vec)? >= tau {
                    return Ok(true);
                }
            }
            Ok(false)
        })
        .collect()
}

/// 1 if any top prediction is within cosine `tau` of any gold answer.
pub fn semantic_accuracy(preds: &[impl AsRef<str>], gold: &[impl AsRef<str>], provider: &EmbeddingProvider, tau: f64) -> Result<f64> {
    let hits = semantic_hits(preds, &gold_set(gold), provider, tau)?;
    Ok(if hits.iter().any(|h| *h) { 1.0 } else { 0.0 })
}

/// Fraction of distinct gold answers with some top prediction within `tau`.
pub fn semantic_recall(preds: &[impl AsRef<str>], gold: &[impl AsRef<str>], provider: &EmbeddingProvider, tau: f64) -> Result<f64> {
    let gold = gold_set(gold);
    if gold.is_empty() {
        check_tau(tau)?;
        return Ok(0.0);
    }
    let hits = semantic_hits(preds, &gold, provider, tau)?.into_iter().filter(|h| *h).count();
    let denom = gold.len().min(TOP_N);
    Ok(hits.min(denom) as f64 / denom as f64)
}

pub fn accuracy_ratio(correct: usize, total: usize) -> Result<f64> {
    if total == 0 || correct > total {
        return Err(Error::Validation(format!("accuracy needs 0 <= correct <= total > 0, got {correct}/{total}")));
    }
    Ok(correct as f64 / total as f64)
}
