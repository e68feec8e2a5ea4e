use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::metrics::{exact_match, exact_recall, semantic_accuracy, semantic_recall};
use super::SystemResponse;
use crate::embeddings::EmbeddingProvider;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldPassage {
    pub text: String,
    pub accident_number: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestInstance {
    pub query: String,
    pub answers: Vec<String>,
    pub passages: Vec<GoldPassage>,
}

impl TestInstance {
    pub fn validate(&self) -> Result<()> {
        if self.query.trim().is_empty() {
            return Err(Error::Validation("empty query".into()));
        }
        if self.answers.iter().all(|a| a.trim().is_empty()) {
            return Err(Error::Validation("no gold answers".into()));
        }
        if self.passages.iter().any(|p| p.accident_number.trim().is_empty()) {
            return Err(Error::Validation("gold passage without accident number".into()));
        }
        Ok(())
    }
}

pub fn parse_testset(json: &str) -> Result<Vec<TestInstance>> {
    let raw: Vec<serde_json::Value> =
        serde_json::from_str(json).map_err(|e| Error::Validation(format!("test set is not a JSON array: {e}")))?;
    if raw.is_empty() {
        return Err(Error::Validation("test set is empty".into()));
    }
    raw.into_iter()
        .enumerate()
        .map(|(i, v)| {
            let inst: TestInstance =
                serde_json::from_value(v).map_err(|e| Error::Validation(format!("test instance {i}: {e}")))?;
            inst.validate().map_err(|e| Error::Validation(format!("test instance {i}: {e}")))?;
            Ok(inst)
        })
        .collect()
}

pub fn load_testset(path: &Path) -> Result<Vec<TestInstance>> {
    let text = std::fs::read_to_string(path)?;
    parse_testset(&text)
}

/// Anything that turns a question into a ranked response.
pub trait QaSystem {
    fn name(&self) -> &str;
    fn respond(&self, question: &str) -> Result<SystemResponse>;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub exact_match: f64,
    pub exact_recall: f64,
    pub semantic_accuracy: f64,
    pub semantic_recall: f64,
    pub passage_semantic_accuracy: f64,
    pub passage_semantic_recall: f64,
}

impl Scores {
    fn values(&self) -> [f64; 6] {
        [
            self.exact_match,
            self.exact_recall,
            self.semantic_accuracy,
            self.semantic_recall,
            self.passage_semantic_accuracy,
            self.passage_semantic_recall,
        ]
    }

    const HEADERS: [&'static str; 6] = ["EM", "ER", "SemAcc", "SemRec", "PsgSemAcc", "PsgSemRec"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub query: String,
    pub answers: Vec<String>,
    pub scores: Scores,
    pub abstained: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub system: String,
    pub tau: f64,
    pub instances: Vec<InstanceResult>,
    pub mean: Scores,
    pub abstentions: usize,
    pub failures: usize,
}

pub fn score_response(resp: &SystemResponse, inst: &TestInstance, provider: &EmbeddingProvider, tau: f64) -> Result<Scores> {
    let answers = resp.answers();
    let passages = resp.passage_texts();
    let gold_passages: Vec<&str> = inst.passages.iter().map(|p| p.text.as_str()).collect();
    Ok(Scores {
        exact_match: exact_match(&answers, &inst.answers),
        exact_recall: exact_recall(&answers, &inst.answers),
        semantic_accuracy: semantic_accuracy(&answers, &inst.answers, provider, tau)?,
        semantic_recall: semantic_recall(&answers, &inst.answers, provider, tau)?,
        passage_semantic_accuracy: semantic_accuracy(&passages, &gold_passages, provider, tau)?,
        passage_semantic_recall: semantic_recall(&passages, &gold_passages, provider, tau)?,
    })
}

/// Runs `system` over every instance. A failing instance scores zero and is
/// counted under `failures`; metric errors (bad `tau`, embedding service
/// failures) abort the run.
pub fn evaluate(system: &dyn QaSystem, testset: &[TestInstance], provider: &EmbeddingProvider, tau: f64) -> Result<EvalReport> {
    if testset.is_empty() {
        return Err(Error::Validation("test set is empty".into()));
    }
    let mut instances = Vec::with_capacity(testset.len());
    for inst in testset {
        let result = match system.respond(&inst.query) {
            Ok(resp) => InstanceResult {
                query: inst.query.clone(),
                answers: resp.answers().into_iter().map(String::from).collect(),
                scores: score_response(&resp, inst, provider, tau)?,
                abstained: resp.is_empty(),
                error: None,
            },
            Err(e) => {
                log::warn!("{} failed on {:?}: {e}", system.name(), inst.query);
                InstanceResult {
                    query: inst.query.clone(),
                    answers: Vec::new(),
                    scores: Scores::default(),
                    abstained: true,
                    error: Some(e.to_string()),
                }
            }
        };
        instances.push(result);
    }
    let n = instances.len() as f64;
    let mut sums = [0.0; 6];
    for r in &instances {
        for (s, v) in sums.iter_mut().zip(r.scores.values()) {
            *s += v;
        }
    }
    let m = sums.map(|s| s / n);
    Ok(EvalReport {
        system: system.name().to_string(),
        tau,
        abstentions: instances.iter().filter(|r| r.abstained).count(),
        failures: instances.iter().filter(|r| r.error.is_some()).count(),
        mean: Scores {
            exact_match: m[0],
            exact_recall: m[1],
            semantic_accuracy: m[2],
            semantic_recall: m[3],
            passage_semantic_accuracy: m[4],
            passage_semantic_recall: m[5],
        },
        instances,
    })
}

/// Plain-text table, one row per system, one column per mean metric.
pub fn render_table(reports: &[EvalReport]) -> String {
    let name_w = reports.iter().map(|r| r.system.len()).chain([6]).max().unwrap_or(6);
    let mut out = String::new();
    let _ = write!(out, "{:<name_w$}", "System");
    for h in Scores::HEADERS {
        let _ = write!(out, "  {h:>9}");
    }
    let _ = writeln!(out, "  {:>9}", "Abstain");
    for r in reports {
        let _ = write!(out, "{:<name_w$}", r.system);
        for v in r.mean.values() {
            let _ = write!(out, "  {v:>9.4}");
        }
        let _ = writeln!(out, "  {:>9}", format!("{}/{}", r.abstentions, r.instances.len()));
    }
    out
}
