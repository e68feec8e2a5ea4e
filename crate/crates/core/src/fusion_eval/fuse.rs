use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Passage;
use crate::reader::DlAnswer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionPolicy {
    pub total_slots: usize,
    pub per_module_quota: usize,
    pub dedupe: bool,
}

impl Default for FusionPolicy {
    fn default() -> Self {
        FusionPolicy { total_slots: 10, per_module_quota: 5, dedupe: true }
    }
}

impl FusionPolicy {
    pub fn new(total_slots: usize, per_module_quota: usize, dedupe: bool) -> Result<Self> {
        if total_slots == 0 || per_module_quota > total_slots {
            return Err(Error::Config(format!(
                "fusion needs 0 < quota <= slots, got quota={per_module_quota}, slots={total_slots}"
            )));
        }
        Ok(FusionPolicy { total_slots, per_module_quota, dedupe })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    Kg,
    Dl,
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Source::Kg => "KG",
            Source::Dl => "DL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseItem {
    pub text: String,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passage: Option<Passage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
}

impl ResponseItem {
    /// Passage text for scoring; KG answers stand in as their own passage.
    pub fn passage_text(&self) -> &str {
        self.passage.as_ref().map_or(&self.text, |p| &p.text)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SystemResponse {
    pub items: Vec<ResponseItem>,
}

impl SystemResponse {
    pub fn answers(&self) -> Vec<&str> {
        self.items.iter().map(|i| i.text.as_str()).collect()
    }

    pub fn passage_texts(&self) -> Vec<&str> {
        self.items.iter().map(ResponseItem::passage_text).collect()
    }

    pub fn count(&self, source: Source) -> usize {
        self.items.iter().filter(|i| i.source == source).count()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// KG answers first, at most `per_module_quota` of them, then DL answers up
/// to `total_slots`. A KG shortfall is taken up by DL. With `dedupe`, later
/// case-folded repeats are skipped and filling continues past them.
pub fn fuse(kg: &[String], dl: &[DlAnswer], policy: FusionPolicy) -> SystemResponse {
    let mut seen = HashSet::new();
    let mut keep = |text: &str| !policy.dedupe || seen.insert(text.trim().to_lowercase());
    let mut items = Vec::with_capacity(policy.total_slots);
    let kg_cap = policy.per_module_quota.min(policy.total_slots);
    for a in kg {
        if items.len() == kg_cap {
            break;
        }
        if keep(a) {
            items.push(ResponseItem { text: a.clone(), source: Source::Kg, passage: None, score: None });
        }
    }
    for a in dl {
        if items.len() == policy.total_slots {
            break;
        }
        if keep(&a.text) {
            items.push(ResponseItem {
                text: a.text.clone(),
                source: Source::Dl,
                passage: Some(a.passage.clone()),
                score: Some(a.score),
            });
        }
    }
    SystemResponse { items }
}
