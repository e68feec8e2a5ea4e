pub mod app;
pub mod embeddings;
pub mod error;
pub mod fusion_eval;
pub mod ingest;
pub mod nl2sparql;
pub mod ontology;
pub mod reader;
pub mod retrieval;
pub mod text;
pub mod triplestore;

pub use error::{Error, Result};
