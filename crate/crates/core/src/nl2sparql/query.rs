use super::classify::QuestionType;
use super::triples::{CandidateTriple, ANSWER_VAR};
use crate::triplestore::{PrefixMap, Query, QueryForm, Variable};

/// Alias of the count projection.
pub const COUNT_ALIAS: &str = "count";

/// Picks the candidate a question type can use: ranked order, but list and
/// count questions need a variable to project and yes/no questions prefer a
/// fully ground candidate.
pub fn eligible(qtype: QuestionType, ranked: &[CandidateTriple]) -> Option<&CandidateTriple> {
    match qtype {
        QuestionType::List | QuestionType::Count => ranked.iter().find(|c| !c.is_ground()),
        QuestionType::Boolean => ranked.iter().find(|c| c.is_ground()).or_else(|| ranked.first()),
    }
}

/// The query for one candidate: ASK, SELECT DISTINCT ?x or COUNT(DISTINCT ?x).
pub fn query_for(qtype: QuestionType, triple: &CandidateTriple, prefixes: &PrefixMap) -> Option<Query> {
    let x = Variable::new(ANSWER_VAR).expect("valid variable name");
    let form = match qtype {
        QuestionType::Boolean => QueryForm::Ask,
        QuestionType::List => QueryForm::SelectDistinct(x),
        QuestionType::Count => QueryForm::Count { var: x, alias: Variable::new(COUNT_ALIAS).expect("valid variable name") },
    };
    Query::new(form, triple.patterns.clone(), prefixes.clone()).ok()
}

/// Query text over the best eligible candidate, PREFIX lines first; `None`
/// is the abstention signal.
pub fn construct_query(qtype: QuestionType, ranked: &[CandidateTriple], prefixes: &PrefixMap) -> Option<String> {
    eligible(qtype, ranked).and_then(|c| query_for(qtype, c, prefixes)).map(|q| q.to_string())
}
