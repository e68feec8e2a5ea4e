use std::sync::{Arc, OnceLock};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::Vector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbedRequest {
    pub texts: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbedResponse {
    pub dim: usize,
    pub vectors: Vec<Vec<f64>>,
}

/// Client for a `/embed` service. Cloning shares the connection pool and the
/// learned dimension.
#[derive(Debug, Clone)]
pub struct RemoteEmbedder {
    endpoint: String,
    client: reqwest::blocking::Client,
    dim: Arc<OnceLock<usize>>,
}

pub(crate) fn http_client(timeout: Duration) -> Result<reqwest::blocking::Client> {
    reqwest::blocking::Client::builder()
        .timeout(timeout)
        .build()
        .map_err(|e| Error::Remote(format!("cannot build HTTP client: {e}")))
}

impl RemoteEmbedder {
    pub fn new(endpoint: &str) -> Result<Self> {
        Ok(RemoteEmbedder {
            endpoint: endpoint.trim_end_matches('/').to_string(),
            client: http_client(Duration::from_secs(30))?,
            dim: Arc::new(OnceLock::new()),
        })
    }

    /// Like [`RemoteEmbedder::new`] but embeds a probe text so the dimension is
    /// known and an unreachable service fails here rather than mid-query.
    pub fn connect(endpoint: &str) -> Result<Self> {
        let r = Self::new(endpoint)?;
        r.embed(&["probe".to_string()])?;
        Ok(r)
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    /// Dimension seen in the first successful response, 0 before that.
    pub fn dim(&self) -> usize {
        self.dim.get().copied().unwrap_or(0)
    }

    pub fn embed(&self, texts: &[String]) -> Result<Vec<Vector>> {
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        let url = format!("{}/embed", self.endpoint);
        let resp = self
            .client
            .post(&url)
            .json(&EmbedRequest { texts: texts.to_vec() })
            .send()
            .and_then(|r| r.error_for_status())
            .map_err(|e| Error::Remote(format!("POST {url}: {e}")))?;
        let body: EmbedResponse = resp.json().map_err(|e| Error::Remote(format!("POST {url}: bad response body: {e}")))?;
        self.validate(texts.len(), body)
    }

    fn validate(&self, expected: usize, body: EmbedResponse) -> Result<Vec<Vector>> {
        if body.vectors.len() != expected {
            return Err(Error::Remote(format!("expected {expected} vectors, got {}", body.vectors.len())));
        }
        let dim = *self.dim.get_or_init(|| body.dim);
        if body.dim != dim {
            return Err(Error::Remote(format!("service dimension changed from {dim} to {}", body.dim)));
        }
        body.vectors
            .into_iter()
            .map(|v| {
                if v.len() != dim {
                    return Err(Error::Remote(format!("vector of length {} where dim is {dim}", v.len())));
                }
                Vector::new(v).map_err(|e| Error::Remote(e.to_string()))
            })
            .collect()
    }
}

/// One-shot form of [`RemoteEmbedder::embed`].
pub fn embed_remote(texts: &[String], endpoint: &str) -> Result<Vec<Vector>> {
    RemoteEmbedder::new(endpoint)?.embed(texts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_needs_no_service() {
        assert!(embed_remote(&[], "http://127.0.0.1:9").unwrap().is_empty());
    }

    #[test]
    fn unreachable_is_remote_error() {
        let err = embed_remote(&["x".into()], "http://127.0.0.1:9").unwrap_err();
        assert!(matches!(err, Error::Remote(_)));
    }

    #[test]
    fn validation_rules() {
        let r = RemoteEmbedder::new("http://unused").unwrap();
        let bad_count = EmbedResponse { dim: 2, vectors: vec![vec![1.0, 0.0]] };
        assert!(r.validate(2, bad_count).is_err());
        let ok = EmbedResponse { dim: 2, vectors: vec![vec![1.0, 0.0], vec![0.0, 1.0]] };
        assert_eq!(r.validate(2, ok).unwrap().len(), 2);
        assert_eq!(r.dim(), 2);
        let ragged = EmbedResponse { dim: 2, vectors: vec![vec![1.0]] };
        assert!(r.validate(1, ragged).is_err());
        let changed = EmbedResponse { dim: 3, vectors: vec![vec![1.0, 0.0, 0.0]] };
        assert!(r.validate(1, changed).is_err());
    }
}
