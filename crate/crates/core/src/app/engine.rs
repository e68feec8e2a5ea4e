use serde::{Deserialize, Serialize};

use super::config::{AppConfig, KG_FILE, PASSAGES_JSON};
use crate::embeddings::EmbeddingProvider;
use crate::error::{Error, Result};
use crate::fusion_eval::{fuse, FusionPolicy, QaSystem, ResponseItem, Source, SystemResponse};
use crate::ingest::{import_passages, Passage, PassageFormat};
use crate::nl2sparql::{Kgqa, KgqaConfig};
use crate::reader::{Dlqa, DlqaConfig, RemoteReader};
use crate::triplestore::{parse_ntlines, Graph};

/// Which answer streams feed the response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemMode {
    Kg,
    Dl,
    Hybrid,
}

impl SystemMode {
    pub fn name(self) -> &'static str {
        match self {
            SystemMode::Kg => "KGQA",
            SystemMode::Dl => "DLQA",
            SystemMode::Hybrid => "Hybrid",
        }
    }
}

/// Graph, indexes and answerers, built once and shared read-only.
#[derive(Debug)]
pub struct Engine {
    graph: Graph,
    kgqa: Kgqa,
    dlqa: Dlqa,
    provider: EmbeddingProvider,
    policy: FusionPolicy,
}

impl Engine {
    /// Builds both answerers. Blocking: call outside any async runtime when
    /// remote services are configured.
    pub fn new(
        graph: Graph,
        passages: Vec<Passage>,
        provider: EmbeddingProvider,
        reader: Option<RemoteReader>,
        kgqa: KgqaConfig,
        dlqa: DlqaConfig,
        policy: FusionPolicy,
    ) -> Result<Self> {
        let (kgqa, provider) = match Kgqa::new(&graph, &provider, kgqa) {
            Ok(k) => (k, provider),
            Err(e) if provider.is_remote() => {
                log::warn!("entity linking with remote embeddings failed ({e}); using hashed embeddings");
                let hashed = EmbeddingProvider::default();
                (Kgqa::new(&graph, &hashed, kgqa)?, hashed)
            }
            Err(e) => return Err(e),
        };
        let dlqa = Dlqa::new(passages, provider.clone(), reader, dlqa)?;
        Ok(Engine { graph, kgqa, dlqa, provider, policy })
    }

    /// Loads the artifacts written by `build` from `config.data_dir`.
    pub fn load(config: &AppConfig) -> Result<Self> {
        config.validate()?;
        let graph = parse_ntlines(&std::fs::read_to_string(config.artifact(KG_FILE))?)?;
        let passages = import_passages(&std::fs::read_to_string(config.artifact(PASSAGES_JSON))?, PassageFormat::Json)?;
        Engine::new(
            graph,
            passages,
            config.provider.build()?,
            config.reader.build(config.reader_mode)?,
            config.kgqa,
            config.dlqa,
            config.policy,
        )
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn kgqa(&self) -> &Kgqa {
        &self.kgqa
    }

    pub fn dlqa(&self) -> &Dlqa {
        &self.dlqa
    }

    /// The provider in effect after any fallback.
    pub fn provider(&self) -> &EmbeddingProvider {
        &self.provider
    }

    pub fn policy(&self) -> FusionPolicy {
        self.policy
    }

    pub fn respond(&self, question: &str, mode: SystemMode) -> Result<SystemResponse> {
        if question.trim().is_empty() {
            return Err(Error::Validation("empty question".into()));
        }
        Ok(match mode {
            SystemMode::Kg => SystemResponse {
                items: self
                    .kgqa
                    .answer(question, &self.graph)
                    .into_iter()
                    .take(self.policy.total_slots)
                    .map(|text| ResponseItem { text, source: Source::Kg, passage: None, score: None })
                    .collect(),
            },
            SystemMode::Dl => fuse(&[], &self.dlqa.answer(question).answers, self.policy),
            SystemMode::Hybrid => {
                let kg = self.kgqa.answer(question, &self.graph);
                fuse(&kg, &self.dlqa.answer(question).answers, self.policy)
            }
        })
    }

    pub fn system(&self, mode: SystemMode) -> EngineSystem<'_> {
        EngineSystem { engine: self, mode }
    }
}

/// An [`Engine`] viewed as one of the three evaluated systems.
pub struct EngineSystem<'a> {
    engine: &'a Engine,
    mode: SystemMode,
}

impl QaSystem for EngineSystem<'_> {
    fn name(&self) -> &str {
        self.mode.name()
    }

    fn respond(&self, question: &str) -> Result<SystemResponse> {
        self.engine.respond(question, self.mode)
    }
}

/// Numbered text rendering of a response with source tags and snippets.
pub fn render_response(resp: &SystemResponse) -> String {
    if resp.is_empty() {
        return "no answer\n".to_string();
    }
    let mut out = String::new();
    for (i, item) in resp.items.iter().enumerate() {
        out.push_str(&format!("{:>2}. [{}] {}\n", i + 1, item.source, item.text));
        if let Some(p) = &item.passage {
            out.push_str(&format!("      {} / {}: {}\n", p.report_id, p.heading, snippet(&p.text, 100)));
        }
    }
    out
}

fn snippet(text: &str, max_chars: usize) -> String {
    let flat = text.split_whitespace().collect::<Vec<_>>().join(" ");
    match flat.char_indices().nth(max_chars) {
        Some((cut, _)) => format!("{}...", &flat[..cut]),
        None => flat,
    }
}
