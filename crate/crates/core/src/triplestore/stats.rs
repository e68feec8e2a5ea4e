use serde::{Deserialize, Serialize};

use super::graph::Graph;
use super::term::{ns, Term};

/// Counts in the shape of a Protégé ontology summary.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KgStats {
    pub entity_classes: usize,
    pub individuals: usize,
    pub object_properties: usize,
    pub data_properties: usize,
    /// Total triple count.
    pub axioms: usize,
}

/// Namespace prefixes that classify IRIs for [`stats`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatsConfig {
    pub class_prefixes: Vec<String>,
    pub individual_prefixes: Vec<String>,
    pub object_property_prefixes: Vec<String>,
    pub data_property_prefixes: Vec<String>,
}

impl Default for StatsConfig {
    fn default() -> Self {
        StatsConfig {
            class_prefixes: vec![ns::CLASS.into()],
            individual_prefixes: vec![ns::INST.into(), ns::ACC.into()],
            object_property_prefixes: vec![ns::REL.into()],
            data_property_prefixes: vec![ns::DATA.into()],
        }
    }
}

fn has_prefix(s: &str, prefixes: &[String]) -> bool {
    prefixes.iter().any(|p| s.starts_with(p.as_str()))
}

/// Each category is counted in the position that declares it: individuals as
/// distinct subjects, properties as distinct predicates, classes as distinct
/// objects. Every counted IRI therefore owns at least one triple, which keeps
/// every count at or below `axioms`.
pub fn stats(graph: &Graph, cfg: &StatsConfig) -> KgStats {
    KgStats {
        entity_classes: graph
            .objects()
            .filter(|t| matches!(t, Term::Iri(i) if has_prefix(i.as_str(), &cfg.class_prefixes)))
            .count(),
        individuals: graph.subjects().filter(|i| has_prefix(i.as_str(), &cfg.individual_prefixes)).count(),
        object_properties: graph.predicates().filter(|i| has_prefix(i.as_str(), &cfg.object_property_prefixes)).count(),
        data_properties: graph.predicates().filter(|i| has_prefix(i.as_str(), &cfg.data_property_prefixes)).count(),
        axioms: graph.len(),
    }
}

impl KgStats {
    /// Two-column table in the style of the ontology summary.
    pub fn to_table(&self) -> String {
        let rows = [
            ("Entity Class", self.entity_classes),
            ("Individual", self.individuals),
            ("Object Property", self.object_properties),
            ("Data Property", self.data_properties),
            ("Axioms", self.axioms),
        ];
        let mut out = format!("{:<18}{:>10}\n", "Metrics", "Count(#)");
        for (name, n) in rows {
            out.push_str(&format!("{name:<18}{n:>10}\n"));
        }
        out
    }
}
