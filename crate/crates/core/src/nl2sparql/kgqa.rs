use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::classify::{classify_question, QuestionType};
use super::linking::{resolve_mentions, LinkCandidate, Linker, DEFAULT_THETA_LINK, DEFAULT_TOP_LINKS};
use super::mentions::{extract_mentions, MentionKind};
use super::query::{eligible, query_for};
use super::triples::{generate_triples, ground_candidates, rank_triples, CandidateTriple};
use crate::embeddings::EmbeddingProvider;
use crate::error::{Error, Result};
use crate::triplestore::{execute, ns, Graph, QueryResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KgqaConfig {
    pub theta_link: f64,
    pub top_links: usize,
}

impl Default for KgqaConfig {
    fn default() -> Self {
        KgqaConfig { theta_link: DEFAULT_THETA_LINK, top_links: DEFAULT_TOP_LINKS }
    }
}

/// Everything the pipeline decided for one question.
#[derive(Debug, Clone, Serialize)]
pub struct TranslationResult {
    pub qtype: QuestionType,
    pub links: Vec<LinkCandidate>,
    /// Valid candidates, best first.
    pub candidates: Vec<CandidateTriple>,
    /// Query over the best eligible candidate; `None` means abstention.
    pub query_text: Option<String>,
    /// Candidates whose queries produced `answers`.
    pub triples_used: Vec<CandidateTriple>,
    pub answers: Vec<String>,
}

impl TranslationResult {
    fn abstain(qtype: QuestionType, links: Vec<LinkCandidate>) -> Self {
        TranslationResult { qtype, links, candidates: Vec::new(), query_text: None, triples_used: Vec::new(), answers: Vec::new() }
    }

    pub fn abstained(&self) -> bool {
        self.answers.is_empty()
    }
}

/// The question-to-SPARQL answerer. The linker must have been built from the
/// graph passed to [`Kgqa::translate`].
#[derive(Debug, Clone)]
pub struct Kgqa {
    linker: Linker,
    config: KgqaConfig,
}

impl Kgqa {
    pub fn new(kg: &Graph, provider: &EmbeddingProvider, config: KgqaConfig) -> Result<Self> {
        Ok(Kgqa { linker: Linker::new(kg, provider)?, config })
    }

    pub fn config(&self) -> &KgqaConfig {
        &self.config
    }

    pub fn linker(&self) -> &Linker {
        &self.linker
    }

    /// Classify, extract mentions, link, generate and rank triples, then run
    /// the query (or queries, for list questions) against the graph.
    pub fn translate(&self, q: &str, kg: &Graph) -> Result<TranslationResult> {
        let qtype = classify_question(q)?;
        let mentions = match extract_mentions(q) {
            Ok(m) => m,
            Err(Error::NoMention(_)) => return Ok(TranslationResult::abstain(qtype, Vec::new())),
            Err(e) => return Err(e),
        };
        let links = resolve_mentions(&self.linker.link(&mentions, self.config.theta_link, self.config.top_links)?);
        let (entities, relations): (Vec<_>, Vec<_>) =
            links.iter().cloned().partition(|c| c.mention.kind_hint == MentionKind::EntityLike);
        let candidates = rank_triples(generate_triples(&entities, &relations, kg), q);
        let prefixes = ns::default_prefixes();

        if qtype == QuestionType::Boolean && !candidates.iter().any(CandidateTriple::is_ground) {
            // two entities were named but no relation between them holds
            if let Some(g) = rank_triples(ground_candidates(&entities, &relations, kg), q).into_iter().next() {
                let query = query_for(qtype, &g, &prefixes).expect("ground candidate forms a query");
                let QueryResult::Boolean(holds) = execute(kg, &query)? else { unreachable!("ASK returns a boolean") };
                return Ok(TranslationResult {
                    qtype,
                    links,
                    candidates,
                    query_text: Some(query.to_string()),
                    triples_used: vec![g],
                    answers: vec![if holds { "Yes" } else { "No" }.to_string()],
                });
            }
        }
        let Some(best) = eligible(qtype, &candidates) else {
            return Ok(TranslationResult::abstain(qtype, links));
        };
        let query_text = query_for(qtype, best, &prefixes).map(|q| q.to_string());
        let mut answers = Vec::new();
        let mut triples_used = Vec::new();
        match qtype {
            QuestionType::List => {
                let mut seen = HashSet::new();
                // only readings as good as the best one: a conjunction's relaxations
                // or a weaker entity link would answer a different question
                let tied = |c: &&CandidateTriple| {
                    !c.is_ground() && c.patterns.len() == best.patterns.len() && c.rank_score == best.rank_score
                };
                for c in candidates.iter().filter(tied) {
                    let Some(query) = query_for(qtype, c, &prefixes) else { continue };
                    let QueryResult::Terms(terms) = execute(kg, &query)? else { continue };
                    let before = answers.len();
                    for t in &terms {
                        let label = kg.display_name(t);
                        if seen.insert(label.clone()) {
                            answers.push(label);
                        }
                    }
                    if answers.len() > before {
                        triples_used.push(c.clone());
                    }
                }
            }
            QuestionType::Count | QuestionType::Boolean => {
                let query = query_for(qtype, best, &prefixes).expect("eligible candidate forms a query");
                answers.push(match execute(kg, &query)? {
                    QueryResult::Count(n) => n.to_string(),
                    QueryResult::Boolean(b) => if b { "Yes" } else { "No" }.to_string(),
                    QueryResult::Terms(_) => unreachable!("count/ask query returns a scalar"),
                });
                triples_used.push(best.clone());
            }
        }
        Ok(TranslationResult { qtype, links, candidates, query_text, triples_used, answers })
    }

    /// Answer labels, or an empty list when the pipeline abstains or fails.
    pub fn answer(&self, q: &str, kg: &Graph) -> Vec<String> {
        match self.translate(q, kg) {
            Ok(t) => t.answers,
            Err(e) => {
                log::warn!("KGQA abstains on {q:?}: {e}");
                Vec::new()
            }
        }
    }
}

/// One-shot form of [`Kgqa::answer`]; embeds the KG vocabulary on every call.
pub fn kgqa_answer(q: &str, kg: &Graph, provider: &EmbeddingProvider, config: KgqaConfig) -> Vec<String> {
    match Kgqa::new(kg, provider, config) {
        Ok(k) => k.answer(q, kg),
        Err(e) => {
            log::warn!("KGQA unavailable: {e}");
            Vec::new()
        }
    }
}
