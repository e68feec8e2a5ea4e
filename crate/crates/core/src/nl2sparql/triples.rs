use std::cmp::Ordering;
use std::collections::HashSet;

use serde::Serialize;

use super::linking::{relation_label, LinkCandidate};
use crate::text::{jaccard, term_set};
use crate::triplestore::{ask, Graph, Iri, PatternTerm, Term, TriplePattern, Variable};

/// Name of the answer variable in generated patterns.
pub const ANSWER_VAR: &str = "x";

/// One or two triple patterns (two only as a conjunction on `?x`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateTriple {
    #[serde(serialize_with = "patterns_as_text")]
    pub patterns: Vec<TriplePattern>,
    pub verbalization: String,
    pub valid: bool,
    pub rank_score: f64,
}

fn patterns_as_text<S: serde::Serializer>(p: &[TriplePattern], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(p.iter().map(|t| t.to_string()))
}

impl CandidateTriple {
    pub fn new(patterns: Vec<TriplePattern>, kg: &Graph) -> Self {
        let verbalization = verbalize(&patterns, kg);
        CandidateTriple { patterns, verbalization, valid: false, rank_score: 0.0 }
    }

    pub fn is_ground(&self) -> bool {
        self.patterns.iter().all(TriplePattern::is_ground)
    }

    /// Re-runs the ASK probe and records the outcome.
    pub fn validate(&mut self, kg: &Graph) -> bool {
        self.valid = ask(kg, &self.patterns);
        self.valid
    }

    fn pattern_text(&self) -> String {
        self.patterns.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" . ")
    }
}

fn term_words(t: &PatternTerm, predicate: bool, kg: &Graph) -> Option<String> {
    match t {
        PatternTerm::Var(_) => None,
        PatternTerm::Term(Term::Iri(i)) if predicate => Some(relation_label(i)),
        PatternTerm::Term(term) => Some(kg.display_name(term)),
    }
}

/// Labels of the pattern terms in order, variables skipped.
pub fn verbalize(patterns: &[TriplePattern], kg: &Graph) -> String {
    patterns
        .iter()
        .flat_map(|p| {
            [
                term_words(&p.subject, false, kg),
                term_words(&p.predicate, true, kg),
                term_words(&p.object, false, kg),
            ]
        })
        .flatten()
        .collect::<Vec<_>>()
        .join(" ")
}

fn distinct<'a>(cands: impl Iterator<Item = &'a LinkCandidate>) -> Vec<&'a LinkCandidate> {
    let mut seen = HashSet::new();
    cands.filter(|c| seen.insert(c.kg_term.clone())).collect()
}

fn ground_shapes(ents: &[&LinkCandidate], rels: &[&Iri]) -> Vec<Vec<TriplePattern>> {
    let mut shapes = Vec::new();
    for e1 in ents {
        for e2 in ents {
            if e1.kg_term == e2.kg_term {
                continue;
            }
            for r in rels {
                shapes.push(vec![TriplePattern::new(e1.kg_term.clone(), (*r).clone(), Term::Iri(e2.kg_term.clone()))]);
            }
        }
    }
    shapes
}

/// The `(e1, r, e2)` shapes between entities of different mentions, subject
/// first in question order, without the ASK filter. A yes/no question whose shapes all fail is answered "No".
pub fn ground_candidates(entity_cands: &[LinkCandidate], relation_cands: &[LinkCandidate], kg: &Graph) -> Vec<CandidateTriple> {
    let ents = distinct(entity_cands.iter());
    let rels: Vec<&Iri> = distinct(relation_cands.iter()).into_iter().map(|c| &c.kg_term).collect();
    ground_shapes(&ents, &rels)
        .into_iter()
        .filter(|p| {
            let mention = |iri: &Iri| ents.iter().find(|e| &e.kg_term == iri).map(|e| &e.mention);
            match (&p[0].subject, &p[0].object) {
                // the earlier-mentioned entity is the subject, as in "was A caused by B"
                (PatternTerm::Term(Term::Iri(s)), PatternTerm::Term(Term::Iri(o))) => {
                    matches!((mention(s), mention(o)), (Some(a), Some(b)) if a.span.0 < b.span.0)
                }
                _ => false,
            }
        })
        .map(|p| {
            let mut c = CandidateTriple::new(p, kg);
            c.validate(kg);
            c
        })
        .collect()
}

/// Every shape the linked terms can form, kept only when an ASK probe over
/// the graph succeeds:
/// `(e, r, ?x)` and `(?x, r, e)` for each entity and relation, `(e1, r, e2)`
/// for distinct entities, and `{(?x, r1, e1) . (?x, r2, e2)}` for entities
/// from different mentions and distinct relations.
pub fn generate_triples(entity_cands: &[LinkCandidate], relation_cands: &[LinkCandidate], kg: &Graph) -> Vec<CandidateTriple> {
    let ents = distinct(entity_cands.iter());
    let rels: Vec<&Iri> = distinct(relation_cands.iter()).into_iter().map(|c| &c.kg_term).collect();
    let x = Variable::new(ANSWER_VAR).expect("valid variable name");
    let mut shapes: Vec<Vec<TriplePattern>> = Vec::new();
    for e in &ents {
        for r in &rels {
            let (e, r) = (e.kg_term.clone(), (*r).clone());
            shapes.push(vec![TriplePattern::new(e.clone(), r.clone(), x.clone())]);
            shapes.push(vec![TriplePattern::new(x.clone(), r, e)]);
        }
    }
    shapes.extend(ground_shapes(&ents, &rels));
    for (i, e1) in ents.iter().enumerate() {
        for e2 in &ents[i + 1..] {
            if e1.mention == e2.mention {
                continue;
            }
            for r1 in &rels {
                for r2 in &rels {
                    if r1 == r2 {
                        continue;
                    }
                    shapes.push(vec![
                        TriplePattern::new(x.clone(), (*r1).clone(), e1.kg_term.clone()),
                        TriplePattern::new(x.clone(), (*r2).clone(), e2.kg_term.clone()),
                    ]);
                }
            }
        }
    }
    shapes
        .into_iter()
        .filter_map(|p| {
            let mut c = CandidateTriple::new(p, kg);
            c.validate(kg).then_some(c)
        })
        .collect()
}

fn order(a: &CandidateTriple, b: &CandidateTriple) -> Ordering {
    b.rank_score
        .total_cmp(&a.rank_score)
        .then(a.verbalization.len().cmp(&b.verbalization.len()))
        .then_with(|| a.verbalization.cmp(&b.verbalization))
        .then_with(|| a.pattern_text().cmp(&b.pattern_text()))
}

/// Scores each candidate by Jaccard overlap between the question's content
/// terms and its verbalization's, best first; ties go to the shorter
/// verbalization, then lexicographic order.
pub fn rank_triples(mut candidates: Vec<CandidateTriple>, q: &str) -> Vec<CandidateTriple> {
    let qs = term_set(q);
    for c in &mut candidates {
        c.rank_score = jaccard(&qs, &term_set(&c.verbalization));
    }
    candidates.sort_by(order);
    candidates
}
