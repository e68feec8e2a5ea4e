use super::{top_k, ScoredPassage};
use crate::embeddings::{cosine, EmbeddingProvider, Vector};
use crate::error::Result;
use crate::ingest::Passage;

fn passage_text(p: &Passage) -> String {
    format!("{} {}", p.heading, p.text)
}

/// Passage embeddings computed once so queries only embed the question.
#[derive(Debug, Clone)]
pub struct DenseIndex {
    passages: Vec<Passage>,
    vectors: Vec<Vector>,
}

impl DenseIndex {
    pub fn build(passages: Vec<Passage>, provider: &EmbeddingProvider) -> Result<Self> {
        let texts: Vec<String> = passages.iter().map(passage_text).collect();
        let vectors = provider.embed_batch(&texts)?;
        Ok(DenseIndex { passages, vectors })
    }

    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn retrieve(&self, q: &str, provider: &EmbeddingProvider, k: usize) -> Result<Vec<ScoredPassage>> {
        let qv = provider.embed(q)?;
        let scores = self.vectors.iter().map(|v| cosine(&qv, v)).collect::<Result<Vec<_>>>()?;
        Ok(top_k(&self.passages, scores, k))
    }
}

/// Cosine between the question and `heading + " " + text` of each passage.
pub fn retrieve_dense(passages: &[Passage], q: &str, provider: &EmbeddingProvider, k: usize) -> Result<Vec<ScoredPassage>> {
    DenseIndex::build(passages.to_vec(), provider)?.retrieve(q, provider, k)
}
