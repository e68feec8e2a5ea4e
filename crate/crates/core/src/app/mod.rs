//! Building artifacts, loading them into an engine, and the HTTP service.

mod config;
mod engine;
mod kgbuild;
mod server;

pub use config::{AppConfig, ProviderSpec, ReaderSpec, DEFAULT_PORT, KG_FILE, MODEL_URL_ENV, PASSAGES_JSON, PASSAGES_JSONL, STATS_FILE};
pub use engine::{render_response, Engine, EngineSystem, SystemMode};
pub use kgbuild::{build_graph, cmd_build, BuildFailure, BuildOutcome};
pub use server::{router, serve, serve_on};
