//! In-memory triple store, its line-oriented file format, and an executor for
//! the SPARQL subset (ASK / SELECT DISTINCT / COUNT over a basic graph pattern).

mod exec;
mod graph;
mod ntriples;
mod sparql;
mod stats;
mod term;

pub use exec::{ask, execute, pattern_variables, solve, Binding, QueryResult, Solutions};
pub use graph::Graph;
pub use ntriples::{parse_ntlines, serialize};
pub use sparql::{parse_sparql, PatternTerm, Query, QueryForm, TriplePattern, Variable, MAX_PATTERNS};
pub use stats::{stats, KgStats, StatsConfig};
pub use term::{mint, ns, Iri, PrefixMap, Term, Triple};
