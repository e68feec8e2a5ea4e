//! Text embeddings behind one provider type, plus the similarity kernels the
//! rest of the pipeline uses.
//!
//! Three providers exist:
//! - hashed character n-grams (deterministic, offline, the default),
//! - a tab-separated vectors file with hashed fallback for unknown texts,
//! - a remote `/embed` service.

mod file;
mod hashed;
mod remote;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use file::load_vectors;
pub use hashed::{embed_hashed, DEFAULT_DIM, DEFAULT_NGRAM};
pub(crate) use remote::http_client;
pub use remote::{embed_remote, EmbedRequest, EmbedResponse, RemoteEmbedder};

/// Dense vector with finite components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Validation("vector must have at least one component".into()));
        }
        if let Some(i) = components.iter().position(|x| !x.is_finite()) {
            return Err(Error::Validation(format!("non-finite vector component at index {i}")));
        }
        Ok(Vector(components))
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Vector::new(v)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

fn check_dims(u: &Vector, v: &Vector) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::Validation(format!("dimension mismatch: {} vs {}", u.dim(), v.dim())));
    }
    Ok(())
}

/// Cosine similarity; 0 when either vector has zero norm.
pub fn cosine(u: &Vector, v: &Vector) -> Result<f64> {
    check_dims(u, v)?;
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return Ok(0.0);
    }
    let dot: f64 = u.0.iter().zip(&v.0).map(|(a, b)| a * b).sum();
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

pub fn euclidean(u: &Vector, v: &Vector) -> Result<f64> {
    check_dims(u, v)?;
    Ok(u.0.iter().zip(&v.0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
}

/// How texts become vectors. Immutable once built; safe to share across threads.
#[derive(Debug, Clone)]
pub enum EmbeddingProvider {
    HashedNgram { dim: usize, n: usize },
    FileBacked { table: HashMap<String, Vector>, dim: usize, n: usize },
    Remote(RemoteEmbedder),
}

impl Default for EmbeddingProvider {
    fn default() -> Self {
        EmbeddingProvider::HashedNgram { dim: DEFAULT_DIM, n: DEFAULT_NGRAM }
    }
}

impl EmbeddingProvider {
    pub fn hashed(dim: usize, n: usize) -> Result<Self> {
        if dim < 8 || n < 2 {
            return Err(Error::Config(format!("hashed provider needs dim >= 8 and n >= 2, got dim={dim}, n={n}")));
        }
        Ok(EmbeddingProvider::HashedNgram { dim, n })
    }

    pub fn dim(&self) -> usize {
        match self {
            EmbeddingProvider::HashedNgram { dim, .. } | EmbeddingProvider::FileBacked { dim, .. } => *dim,
            EmbeddingProvider::Remote(r) => r.dim(),
        }
    }

    pub fn is_remote(&self) -> bool {
        matches!(self, EmbeddingProvider::Remote(_))
    }

    pub fn embed(&self, text: &str) -> Result<Vector> {
        match self {
            EmbeddingProvider::HashedNgram { dim, n } => Ok(embed_hashed(text, *dim, *n)),
            EmbeddingProvider::FileBacked { table, dim, n } => {
                Ok(table.get(text).cloned().unwrap_or_else(|| embed_hashed(text, *dim, *n)))
            }
            EmbeddingProvider::Remote(r) => {
                let mut v = r.embed(&[text.to_string()])?;
                Ok(v.pop().expect("count validated by client"))
            }
        }
    }

    /// Batch form; one remote round trip instead of one per text.
    pub fn embed_batch<S: AsRef<str>>(&self, texts: &[S]) -> Result<Vec<Vector>> {
        match self {
            EmbeddingProvider::Remote(r) => {
                let owned: Vec<String> = texts.iter().map(|t| t.as_ref().to_string()).collect();
                r.embed(&owned)
            }
            _ => texts.iter().map(|t| self.embed(t.as_ref())).collect(),
        }
    }

    /// Cosine similarity of two texts under this provider.
    pub fn similarity(&self, a: &str, b: &str) -> Result<f64> {
        let v = self.embed_batch(&[a, b])?;
        cosine(&v[0], &v[1])
    }
}
