//! Natural-language question to SPARQL-subset translation and the KG answerer
//! built on it: classify, extract mentions, link them to KG terms, generate
//! and validate candidate triples, rank them, construct and run the query.

mod classify;
mod kgqa;
mod linking;
mod mentions;
mod query;
mod triples;

pub use classify::{classify_question, QuestionType};
pub use kgqa::{kgqa_answer, Kgqa, KgqaConfig, TranslationResult};
pub use linking::{
    link, link_key, relation_label, resolve_mentions, LinkCandidate, Linker, DEFAULT_THETA_LINK, DEFAULT_TOP_LINKS,
};
pub use mentions::{extract_mentions, Mention, MentionKind, MAX_NGRAM};
pub use query::{construct_query, eligible, query_for, COUNT_ALIAS};
pub use triples::{generate_triples, ground_candidates, rank_triples, verbalize, CandidateTriple, ANSWER_VAR};
