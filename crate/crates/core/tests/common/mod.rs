#![allow(dead_code)]

pub mod checks;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::PathBuf;

use aeroqa::app::{build_graph, Engine};
use aeroqa::embeddings::EmbeddingProvider;
use aeroqa::fusion_eval::FusionPolicy;
use aeroqa::ingest::{load_patterns, load_reports, Passage};
use aeroqa::nl2sparql::KgqaConfig;
use aeroqa::ontology::load_taxonomy;
use aeroqa::reader::DlqaConfig;
use aeroqa::triplestore::{Graph, Iri, PatternTerm, Query, QueryForm, QueryResult, Term, Triple, TriplePattern, Variable};
use rand::rngs::StdRng;
use rand::Rng;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture_corpus() -> (Graph, Vec<Passage>) {
    let dir = fixtures();
    let records = load_reports(dir.join("reports")).unwrap();
    let patterns = load_patterns(&std::fs::read_to_string(dir.join("patterns.json")).unwrap()).unwrap();
    let tree = load_taxonomy(&std::fs::read_to_string(dir.join("taxonomy.txt")).unwrap()).unwrap();
    build_graph(&records, &patterns, Some(&tree)).unwrap()
}

/// Hashed embeddings, fallback reader, default policy.
pub fn fixture_engine() -> Engine {
    let (graph, passages) = fixture_corpus();
    Engine::new(
        graph,
        passages,
        EmbeddingProvider::default(),
        None,
        KgqaConfig::default(),
        DlqaConfig::default(),
        FusionPolicy::default(),
    )
    .unwrap()
}

// ---- random graphs and queries with a brute-force evaluator ----

fn iri(i: usize) -> Iri {
    Iri::new(format!("http://t.example/n{i}")).unwrap()
}

fn pred(i: usize) -> Iri {
    Iri::new(format!("http://t.example/p{i}")).unwrap()
}

pub const NODES: usize = 6;
pub const PREDS: usize = 3;
pub const LITS: usize = 2;

fn node_term(rng: &mut StdRng) -> Term {
    if rng.gen_bool(0.2) {
        Term::literal(format!("v{}", rng.gen_range(0..LITS)))
    } else {
        Term::Iri(iri(rng.gen_range(0..NODES)))
    }
}

pub fn random_graph(rng: &mut StdRng, max_triples: usize) -> Graph {
    let mut g = Graph::new();
    for _ in 0..rng.gen_range(0..=max_triples) {
        g.insert(Triple::from_iris(iri(rng.gen_range(0..NODES)), pred(rng.gen_range(0..PREDS)), node_term(rng)));
    }
    g
}

const VARS: [&str; 3] = ["a", "b", "c"];

fn slot(rng: &mut StdRng, position: usize) -> PatternTerm {
    if rng.gen_bool(if position == 1 { 0.25 } else { 0.5 }) {
        return PatternTerm::Var(Variable::new(VARS[rng.gen_range(0..VARS.len())]).unwrap());
    }
    match position {
        0 => PatternTerm::Term(Term::Iri(iri(rng.gen_range(0..NODES)))),
        1 => PatternTerm::Term(Term::Iri(pred(rng.gen_range(0..PREDS)))),
        _ => PatternTerm::Term(node_term(rng)),
    }
}

pub fn random_query(rng: &mut StdRng, max_patterns: usize) -> Query {
    let n = rng.gen_range(1..=max_patterns);
    let patterns: Vec<TriplePattern> = (0..n).map(|_| TriplePattern::new(slot(rng, 0), slot(rng, 1), slot(rng, 2))).collect();
    let vars: Vec<Variable> = {
        let mut seen = Vec::new();
        for p in &patterns {
            for v in p.variables() {
                if !seen.contains(v) {
                    seen.push(v.clone());
                }
            }
        }
        seen
    };
    let form = match (rng.gen_range(0..3), vars.is_empty()) {
        (_, true) | (0, _) => QueryForm::Ask,
        (1, _) => QueryForm::SelectDistinct(vars[rng.gen_range(0..vars.len())].clone()),
        _ => QueryForm::Count { var: vars[rng.gen_range(0..vars.len())].clone(), alias: Variable::new("n").unwrap() },
    };
    Query::new(form, patterns, Default::default()).unwrap()
}

/// Tries every assignment of graph terms to the query's variables.
pub fn brute_force(g: &Graph, q: &Query) -> QueryResult {
    let triples: HashSet<Triple> = g.iter().collect();
    let mut universe: BTreeSet<Term> = BTreeSet::new();
    for t in &triples {
        universe.insert(Term::Iri(t.subject.clone()));
        universe.insert(Term::Iri(t.predicate.clone()));
        universe.insert(t.object.clone());
    }
    let universe: Vec<Term> = universe.into_iter().collect();
    let mut vars: Vec<Variable> = Vec::new();
    for p in &q.patterns {
        for v in p.variables() {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
    }
    let resolve = |pt: &PatternTerm, env: &HashMap<&Variable, &Term>| -> Term {
        match pt {
            PatternTerm::Var(v) => env[v].clone(),
            PatternTerm::Term(t) => t.clone(),
        }
    };
    let mut solutions: Vec<HashMap<&Variable, &Term>> = Vec::new();
    let total = universe.len().pow(vars.len() as u32);
    for mut code in 0..total {
        let mut env = HashMap::new();
        for v in &vars {
            env.insert(v, &universe[code % universe.len()]);
            code /= universe.len();
        }
        let holds = q.patterns.iter().all(|p| {
            Triple::new(resolve(&p.subject, &env), resolve(&p.predicate, &env), resolve(&p.object, &env))
                .is_ok_and(|t| triples.contains(&t))
        });
        if holds {
            solutions.push(env);
        }
    }
    match &q.form {
        QueryForm::Ask => QueryResult::Boolean(!solutions.is_empty()),
        QueryForm::SelectDistinct(v) => {
            let set: BTreeSet<Term> = solutions.iter().map(|s| s[v].clone()).collect();
            QueryResult::Terms(set.into_iter().collect())
        }
        QueryForm::Count { var, .. } => {
            QueryResult::Count(solutions.iter().map(|s| s[var].clone()).collect::<BTreeSet<_>>().len() as u64)
        }
    }
}

/// Order-insensitive view of a result, for comparison with [`brute_force`].
pub fn normalized(r: QueryResult) -> QueryResult {
    match r {
        QueryResult::Terms(mut t) => {
            t.sort();
            QueryResult::Terms(t)
        }
        other => other,
    }
}

// ---- BM25 evaluated straight from the formula ----

/// Scores every passage of a tokenized corpus for a tokenized query.
pub fn bm25_reference(docs: &[Vec<String>], query: &[String], k1: f64, b: f64) -> Vec<f64> {
    let n = docs.len() as f64;
    let avgdl = docs.iter().map(Vec::len).sum::<usize>() as f64 / n;
    docs.iter()
        .map(|d| {
            query
                .iter()
                .map(|t| {
                    let df = docs.iter().filter(|x| x.contains(t)).count() as f64;
                    let idf = ((n - df + 0.5) / (df + 0.5) + 1.0).ln();
                    let f = d.iter().filter(|x| *x == t).count() as f64;
                    idf * f * (k1 + 1.0) / (f + k1 * (1.0 - b + b * d.len() as f64 / avgdl))
                })
                .sum()
        })
        .collect()
}

/// Temporary data directory holding the artifacts built from the fixtures.
pub fn built_data_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let f = fixtures();
    let outcome = aeroqa::app::cmd_build(
        &f.join("reports"),
        &f.join("patterns.json"),
        Some(&f.join("taxonomy.txt")),
        dir.path(),
    )
    .unwrap();
    assert!(outcome.failures.is_empty());
    dir
}
