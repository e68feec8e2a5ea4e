use serde::Serialize;

use super::{read_extractive_fallback, ReaderAnswer, RemoteReader, DEFAULT_PER_PASSAGE};
use crate::embeddings::EmbeddingProvider;
use crate::error::{Error, Result};
use crate::ingest::Passage;
use crate::retrieval::{build_index, retrieve_bm25, Bm25Params, DenseIndex, PassageIndex, ScoredPassage, DEFAULT_K};

pub const DEFAULT_BUDGET: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RetrieverKind {
    #[default]
    Bm25,
    Dense,
}

impl std::str::FromStr for RetrieverKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bm25" => Ok(RetrieverKind::Bm25),
            "dense" => Ok(RetrieverKind::Dense),
            other => Err(Error::Config(format!("unknown retriever {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DlqaConfig {
    pub retriever: RetrieverKind,
    pub k: usize,
    pub budget: usize,
    pub per_passage: usize,
    pub bm25: Bm25Params,
}

impl Default for DlqaConfig {
    fn default() -> Self {
        DlqaConfig {
            retriever: RetrieverKind::Bm25,
            k: DEFAULT_K,
            budget: DEFAULT_BUDGET,
            per_passage: DEFAULT_PER_PASSAGE,
            bm25: Bm25Params::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DlAnswer {
    pub text: String,
    pub passage: Passage,
    /// 1-based rank of the passage in the retrieval list.
    pub passage_rank: usize,
    pub score: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DlqaResult {
    pub passages: Vec<ScoredPassage>,
    pub answers: Vec<DlAnswer>,
}

/// Retriever plus reader over a fixed passage collection.
#[derive(Debug)]
pub struct Dlqa {
    index: PassageIndex,
    dense: Option<DenseIndex>,
    provider: EmbeddingProvider,
    reader: Option<RemoteReader>,
    config: DlqaConfig,
}

impl Dlqa {
    /// A dense index that cannot be built (e.g. the embedding service is
    /// down) leaves the pipeline on BM25 with a warning.
    pub fn new(passages: Vec<Passage>, provider: EmbeddingProvider, reader: Option<RemoteReader>, config: DlqaConfig) -> Result<Self> {
        if config.k == 0 || config.budget == 0 || config.per_passage == 0 {
            return Err(Error::Config("k, budget and per_passage must be positive".into()));
        }
        let dense = match config.retriever {
            RetrieverKind::Dense => match DenseIndex::build(passages.clone(), &provider) {
                Ok(d) => Some(d),
                Err(e) => {
                    log::warn!("dense index unavailable ({e}); using BM25");
                    None
                }
            },
            RetrieverKind::Bm25 => None,
        };
        Ok(Dlqa { index: build_index(passages), dense, provider, reader, config })
    }

    pub fn index(&self) -> &PassageIndex {
        &self.index
    }

    pub fn config(&self) -> &DlqaConfig {
        &self.config
    }

    pub fn retrieve(&self, q: &str) -> Vec<ScoredPassage> {
        if let Some(d) = &self.dense {
            match d.retrieve(q, &self.provider, self.config.k) {
                Ok(r) => return r,
                Err(e) => log::warn!("dense retrieval failed ({e}); using BM25"),
            }
        }
        retrieve_bm25(&self.index, q, self.config.k, self.config.bm25)
    }

    fn read(&self, q: &str, passages: &[Passage]) -> Vec<ReaderAnswer> {
        if let Some(r) = &self.reader {
            match r.read(q, passages, self.config.budget) {
                Ok(a) => return a,
                Err(e) => log::warn!("remote reader failed ({e}); using extractive fallback"),
            }
        }
        read_extractive_fallback(q, passages, self.config.per_passage)
    }

    /// Answers sorted by reader score, at most `budget` of them.
    pub fn answer(&self, q: &str) -> DlqaResult {
        let retrieved = self.retrieve(q);
        if retrieved.is_empty() {
            return DlqaResult { passages: retrieved, answers: Vec::new() };
        }
        let passages: Vec<Passage> = retrieved.iter().map(|s| s.passage.clone()).collect();
        let mut answers: Vec<DlAnswer> = self
            .read(q, &passages)
            .into_iter()
            .map(|a| DlAnswer {
                text: a.text,
                passage: passages[a.passage_index].clone(),
                passage_rank: a.passage_index + 1,
                score: a.score,
            })
            .collect();
        // stable: the reader's own order breaks ties
        answers.sort_by(|a, b| b.score.total_cmp(&a.score));
        answers.truncate(self.config.budget);
        DlqaResult { passages: retrieved, answers }
    }
}

/// One-shot form of [`Dlqa::answer`].
pub fn dlqa_answer(
    q: &str,
    passages: Vec<Passage>,
    provider: EmbeddingProvider,
    reader: Option<RemoteReader>,
    config: DlqaConfig,
) -> Result<DlqaResult> {
    Ok(Dlqa::new(passages, provider, reader, config)?.answer(q))
}
