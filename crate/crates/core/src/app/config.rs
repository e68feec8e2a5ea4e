use std::path::PathBuf;
use std::str::FromStr;

use crate::embeddings::{load_vectors, EmbeddingProvider, RemoteEmbedder};
use crate::error::{Error, Result};
use crate::fusion_eval::{FusionPolicy, DEFAULT_TAU};
use crate::nl2sparql::KgqaConfig;
use crate::reader::{DlqaConfig, ReaderMode, RemoteReader};

/// Default remote endpoint for `remote` without an explicit URL.
pub const MODEL_URL_ENV: &str = "AEROQA_MODEL_URL";
pub const DEFAULT_PORT: u16 = 8080;

pub const KG_FILE: &str = "kg.nt";
pub const PASSAGES_JSON: &str = "passages.json";
pub const PASSAGES_JSONL: &str = "passages.jsonl";
pub const STATS_FILE: &str = "stats.json";

fn remote_url(rest: Option<&str>) -> Result<String> {
    match rest.filter(|s| !s.is_empty()) {
        Some(url) => Ok(url.to_string()),
        None => std::env::var(MODEL_URL_ENV)
            .ok()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::Config(format!("remote endpoint not given and {MODEL_URL_ENV} is unset"))),
    }
}

/// `hashed`, `file:PATH`, `remote` or `remote:URL`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ProviderSpec {
    #[default]
    Hashed,
    File(PathBuf),
    Remote(String),
}

impl FromStr for ProviderSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':').map_or((s, None), |(a, b)| (a, Some(b))) {
            ("hashed", None) => Ok(ProviderSpec::Hashed),
            ("file", Some(p)) if !p.is_empty() => Ok(ProviderSpec::File(p.into())),
            ("remote", rest) => Ok(ProviderSpec::Remote(remote_url(rest)?)),
            _ => Err(Error::Config(format!("unknown provider {s:?}; expected hashed, file:PATH or remote[:URL]"))),
        }
    }
}

impl ProviderSpec {
    /// A remote endpoint that does not answer its probe degrades to the
    /// hashed provider with a warning.
    pub fn build(&self) -> Result<EmbeddingProvider> {
        match self {
            ProviderSpec::Hashed => Ok(EmbeddingProvider::default()),
            ProviderSpec::File(p) => load_vectors(p),
            ProviderSpec::Remote(url) => match RemoteEmbedder::connect(url) {
                Ok(r) => Ok(EmbeddingProvider::Remote(r)),
                Err(e) => {
                    log::warn!("embedding service at {url} unavailable ({e}); using hashed embeddings");
                    Ok(EmbeddingProvider::default())
                }
            },
        }
    }
}

/// `fallback`, `remote` or `remote:URL`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ReaderSpec {
    #[default]
    Fallback,
    Remote(String),
}

impl FromStr for ReaderSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':').map_or((s, None), |(a, b)| (a, Some(b))) {
            ("fallback", None) => Ok(ReaderSpec::Fallback),
            ("remote", rest) => Ok(ReaderSpec::Remote(remote_url(rest)?)),
            _ => Err(Error::Config(format!("unknown reader {s:?}; expected fallback or remote[:URL]"))),
        }
    }
}

impl ReaderSpec {
    pub fn build(&self, mode: ReaderMode) -> Result<Option<RemoteReader>> {
        match self {
            ReaderSpec::Fallback => Ok(None),
            ReaderSpec::Remote(url) => RemoteReader::new(url, mode).map(Some),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AppConfig {
    pub data_dir: PathBuf,
    pub provider: ProviderSpec,
    pub reader: ReaderSpec,
    pub reader_mode: ReaderMode,
    pub policy: FusionPolicy,
    pub kgqa: KgqaConfig,
    pub dlqa: DlqaConfig,
    pub tau: f64,
    pub port: u16,
}

impl AppConfig {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        AppConfig {
            data_dir: data_dir.into(),
            provider: ProviderSpec::default(),
            reader: ReaderSpec::default(),
            reader_mode: ReaderMode::default(),
            policy: FusionPolicy::default(),
            kgqa: KgqaConfig::default(),
            dlqa: DlqaConfig::default(),
            tau: DEFAULT_TAU,
            port: DEFAULT_PORT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(Error::Config(format!("tau must be in (0, 1], got {}", self.tau)));
        }
        if self.dlqa.k == 0 {
            return Err(Error::Config("k must be positive".into()));
        }
        if !(self.kgqa.theta_link > 0.0 && self.kgqa.theta_link <= 1.0) {
            return Err(Error::Config(format!("theta_link must be in (0, 1], got {}", self.kgqa.theta_link)));
        }
        for f in [KG_FILE, PASSAGES_JSON] {
            let p = self.data_dir.join(f);
            if !p.is_file() {
                return Err(Error::Config(format!("{} not found; run `aeroqa build` first", p.display())));
            }
        }
        Ok(())
    }

    pub fn artifact(&self, name: &str) -> PathBuf {
        self.data_dir.join(name)
    }
}
