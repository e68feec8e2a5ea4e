use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{KG_FILE, PASSAGES_JSON, PASSAGES_JSONL, STATS_FILE};
use crate::error::Result;
use crate::ingest::{
    event_triples, export_passages, extract_passages, extract_triples, load_patterns, scan_reports, Passage, PassageFormat,
};
use crate::ontology::load_taxonomy;
use crate::triplestore::{serialize, stats, Graph, KgStats, StatsConfig};

#[derive(Debug, Serialize)]
pub struct BuildFailure {
    pub path: PathBuf,
    pub error: String,
}

#[derive(Debug, Serialize)]
pub struct BuildOutcome {
    pub reports: usize,
    pub passages: usize,
    pub stats: KgStats,
    pub failures: Vec<BuildFailure>,
}

/// Reports in memory to graph and passages, without touching disk.
pub fn build_graph(
    records: &[crate::ingest::ReportRecord],
    patterns: &[crate::ingest::ExtractionPattern],
    taxonomy: Option<&crate::ontology::TaxonomyTree>,
) -> Result<(Graph, Vec<Passage>)> {
    let mut graph = Graph::new();
    let mut passages = Vec::new();
    for rec in records {
        graph.extend(extract_triples(rec, patterns)?);
        if let Some(tree) = taxonomy {
            graph.extend(event_triples(rec, tree, None)?);
        }
        passages.extend(extract_passages(rec));
    }
    Ok((graph, passages))
}

/// Parses the report directory, extracts the graph and passages and writes
/// them to `out`. Reports that fail to parse are listed in the outcome and
/// the rest still get built.
pub fn cmd_build(reports_dir: &Path, patterns_path: &Path, taxonomy_path: Option<&Path>, out: &Path) -> Result<BuildOutcome> {
    let patterns = load_patterns(&std::fs::read_to_string(patterns_path)?)?;
    let taxonomy = match taxonomy_path {
        Some(p) => Some(load_taxonomy(&std::fs::read_to_string(p)?)?),
        None => None,
    };
    let (records, failed) = scan_reports(reports_dir)?;
    let (graph, passages) = build_graph(&records, &patterns, taxonomy.as_ref())?;
    let kg_stats = stats(&graph, &StatsConfig::default());

    std::fs::create_dir_all(out)?;
    std::fs::write(out.join(KG_FILE), serialize(&graph))?;
    std::fs::write(out.join(PASSAGES_JSON), export_passages(&passages, PassageFormat::Json))?;
    std::fs::write(out.join(PASSAGES_JSONL), export_passages(&passages, PassageFormat::Jsonl))?;
    std::fs::write(out.join(STATS_FILE), serde_json::to_string_pretty(&kg_stats)?)?;

    Ok(BuildOutcome {
        reports: records.len(),
        passages: passages.len(),
        stats: kg_stats,
        failures: failed.into_iter().map(|f| BuildFailure { path: f.path, error: f.error.to_string() }).collect(),
    })
}
