//! Accident report parsing, pattern-driven triple extraction and passage export.

mod events;
mod passages;
mod patterns;
mod report;

pub use events::{event_triples, EVENTS_KEY};
pub use passages::{export_passages, extract_passages, import_passages, Passage, PassageFormat};
pub use patterns::{extract_triples, load_patterns, ExtractionPattern, Selector};
pub use report::{load_reports, parse_report, scan_reports, ReportError, Finding, NarrativeParagraph, ReportRecord, ACCIDENT_NUMBER_KEY};
