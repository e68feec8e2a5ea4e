//! Taxonomy handling and statistical term extraction used to derive ontology
//! classes from report text.

mod mapping;
mod taxonomy;
mod terms;

pub use mapping::{map_event_embedding, map_event_keywords, MappingMethod, MappingResult};
pub use taxonomy::{enumerate_paths, load_taxonomy, RootToLeafPath, TaxonomyNode, TaxonomyTree};
pub use terms::{cvalue, tfidf, TermScore};
