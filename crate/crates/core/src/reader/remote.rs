use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{ReaderAnswer, ReaderMode};
use crate::embeddings::http_client;
use crate::error::{Error, Result};
use crate::ingest::Passage;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReadRequest {
    pub question: String,
    pub passages: Vec<Passage>,
    pub mode: ReaderMode,
    pub top_n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WireAnswer {
    pub text: String,
    /// Absent for an abstractive answer drawn from the whole list.
    #[serde(default)]
    pub passage_index: Option<usize>,
    pub score: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReadResponse {
    pub answers: Vec<WireAnswer>,
}

/// Client for a `/read` service.
#[derive(Debug, Clone)]
pub struct RemoteReader {
    endpoint: String,
    mode: ReaderMode,
    client: reqwest::blocking::Client,
}

impl RemoteReader {
    pub fn new(endpoint: &str, mode: ReaderMode) -> Result<Self> {
        Ok(RemoteReader {
            endpoint: endpoint.trim_end_matches('/').to_string(),
            mode,
            client: http_client(Duration::from_secs(120))?,
        })
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    pub fn mode(&self) -> ReaderMode {
        self.mode
    }

    pub fn read(&self, q: &str, passages: &[Passage], top_n: usize) -> Result<Vec<ReaderAnswer>> {
        if passages.is_empty() {
            return Err(Error::Validation("reader called with no passages".into()));
        }
        let url = format!("{}/read", self.endpoint);
        let req = ReadRequest { question: q.to_string(), passages: passages.to_vec(), mode: self.mode, top_n };
        let body: ReadResponse = self
            .client
            .post(&url)
            .json(&req)
            .send()
            .and_then(|r| r.error_for_status())
            .and_then(|r| r.json())
            .map_err(|e| Error::Remote(format!("POST {url}: {e}")))?;
        validate(self.mode, passages, body)
    }
}

/// Response order is kept. Extractive answers that are not substrings of the
/// passage they cite keep their place but drop to score 0.
pub(crate) fn validate(mode: ReaderMode, passages: &[Passage], body: ReadResponse) -> Result<Vec<ReaderAnswer>> {
    body.answers
        .into_iter()
        .map(|a| {
            if !a.score.is_finite() {
                return Err(Error::Remote(format!("non-finite score for answer {:?}", a.text)));
            }
            let idx = match (a.passage_index, mode) {
                (Some(i), _) if i < passages.len() => i,
                (Some(i), _) => return Err(Error::Remote(format!("passage_index {i} out of range for {} passages", passages.len()))),
                (None, ReaderMode::Abstractive) => 0,
                (None, ReaderMode::Extractive) => return Err(Error::Remote("extractive answer without passage_index".into())),
            };
            let mut score = a.score;
            if mode == ReaderMode::Extractive && !passages[idx].text.contains(&a.text) {
                log::warn!("reader answer {:?} is not a span of passage {idx}; demoted", a.text);
                score = 0.0;
            }
            Ok(ReaderAnswer { text: a.text, passage_index: idx, score })
        })
        .collect()
}

/// One-shot form of [`RemoteReader::read`].
pub fn read_remote(q: &str, passages: &[Passage], mode: ReaderMode, endpoint: &str, top_n: usize) -> Result<Vec<ReaderAnswer>> {
    RemoteReader::new(endpoint, mode)?.read(q, passages, top_n)
}
