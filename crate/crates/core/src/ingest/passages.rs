use serde::{Deserialize, Serialize};

use super::report::ReportRecord;
use crate::error::{Error, Result};

/// A retrievable unit of narrative text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Passage {
    pub heading: String,
    pub text: String,
    pub report_id: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PassageFormat {
    Json,
    Jsonl,
}

/// One passage per narrative paragraph, in report order.
pub fn extract_passages(record: &ReportRecord) -> Vec<Passage> {
    record
        .narrative
        .iter()
        .filter(|p| !p.text.trim().is_empty())
        .map(|p| Passage { heading: p.heading.clone(), text: p.text.clone(), report_id: record.accident_number.clone() })
        .collect()
}

pub fn export_passages(passages: &[Passage], format: PassageFormat) -> String {
    match format {
        PassageFormat::Json => serde_json::to_string_pretty(passages).expect("passages serialize"),
        PassageFormat::Jsonl => passages
            .iter()
            .map(|p| serde_json::to_string(p).expect("passage serializes") + "\n")
            .collect(),
    }
}

pub fn import_passages(text: &str, format: PassageFormat) -> Result<Vec<Passage>> {
    match format {
        PassageFormat::Json => Ok(serde_json::from_str(text)?),
        PassageFormat::Jsonl => text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::parse(i + 1, e.to_string())))
            .collect(),
    }
}
