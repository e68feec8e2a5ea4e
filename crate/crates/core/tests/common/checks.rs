//! Whole-suite checks shared by the integration tests and the acceptance
//! binary. Each returns a short detail line on success and the first
//! counterexample on failure.

use std::time::{Duration, Instant};

use aeroqa::app::SystemMode;
use aeroqa::embeddings::EmbeddingProvider;
use aeroqa::fusion_eval::{
    accuracy_ratio, evaluate, exact_match, exact_recall, fuse, load_testset, semantic_accuracy, semantic_recall,
    FusionPolicy, Source,
};
use aeroqa::ingest::Passage;
use aeroqa::ontology::{cvalue, load_taxonomy, map_event_keywords, tfidf};
use aeroqa::reader::DlAnswer;
use aeroqa::retrieval::{bm25_score, build_index, retrieve_bm25, Bm25Params};
use aeroqa::text::terms;
use aeroqa::triplestore::{execute, QueryResult};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Deserialize;

use super::{bm25_reference, brute_force, fixture_engine, fixtures, normalized, random_graph, random_query};

pub type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

// ---- SPARQL executor ----

pub fn sparql_oracle(graphs: usize, budget: Duration) -> Check {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut queries, mut nonempty) = (0, 0);
    for case in 0..graphs {
        let g = random_graph(&mut rng, 50);
        for _ in 0..3 {
            let q = random_query(&mut rng, 3);
            let got = normalized(execute(&g, &q).map_err(|e| format!("case {case}: {e}"))?);
            let want = brute_force(&g, &q);
            ensure!(got == want, "case {case}: {q}\n  got  {got:?}\n  want {want:?}");
            queries += 1;
            nonempty += usize::from(!matches!(&got, QueryResult::Boolean(false) | QueryResult::Count(0))
                && got != QueryResult::Terms(vec![]));
        }
    }
    let elapsed = start.elapsed();
    ensure!(nonempty * 5 > queries, "only {nonempty}/{queries} queries had solutions");
    ensure!(elapsed < budget, "took {elapsed:?}, budget {budget:?}");
    Ok(format!("{graphs} graphs, {queries} queries ({nonempty} non-empty) in {elapsed:.2?}"))
}

// ---- fusion ----

pub fn dl_answers(texts: &[String]) -> Vec<DlAnswer> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| DlAnswer {
            text: t.clone(),
            passage: Passage { heading: "Analysis".into(), text: format!("passage for {t}"), report_id: format!("R{i}") },
            passage_rank: i + 1,
            score: 1.0 / (i + 1) as f64,
        })
        .collect()
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Every pair of list lengths in `0..=max`, deduplication off so the slot
/// arithmetic is exact.
pub fn fusion_exhaustive(max: usize) -> Check {
    let policy = FusionPolicy { dedupe: false, ..FusionPolicy::default() };
    for nk in 0..=max {
        for nd in 0..=max {
            let kg = labels("kg", nk);
            let dl = labels("dl", nd);
            let resp = fuse(&kg, &dl_answers(&dl), policy);
            let k = resp.count(Source::Kg);
            let d = resp.count(Source::Dl);
            let ctx = format!("|kg|={nk} |dl|={nd}");
            ensure!(resp.items.len() <= 10, "{ctx}: {} items", resp.items.len());
            ensure!(k == nk.min(5), "{ctx}: {k} KG items");
            ensure!(d == nd.min(10 - k), "{ctx}: {d} DL items");
            ensure!(resp.items.iter().take(k).all(|i| i.source == Source::Kg), "{ctx}: KG items not first");
            let texts = resp.answers();
            ensure!(texts[..k] == kg[..k], "{ctx}: KG order changed");
            ensure!(texts[k..] == dl[..d], "{ctx}: DL order changed");
            if nk == 0 && nd >= 10 {
                ensure!(d == 10, "{ctx}: KG abstention should give 10 DL items");
            }
            if nk == 2 && nd >= 8 {
                ensure!(d == 8, "{ctx}: two KG answers should leave 8 DL slots");
            }
        }
    }
    Ok(format!("{} length pairs", (max + 1) * (max + 1)))
}

/// Random lists drawn from a tiny vocabulary so repeats are common.
pub fn fusion_random(cases: usize) -> Check {
    const VOCAB: &[&str] = &["Fuel", "fuel ", "Gear", "Wind", "wind", "Stall", "Bird", "Ice", "Brake", "Flap", "Tire", "Gust"];
    let mut rng = StdRng::seed_from_u64(11);
    for case in 0..cases {
        let (nk, nd) = (rng.gen_range(0..=12), rng.gen_range(0..=12));
        let mut pick = |n: usize| -> Vec<String> { (0..n).map(|_| VOCAB.choose(&mut rng).unwrap().to_string()).collect() };
        let kg = pick(nk);
        let dl = pick(nd);
        let resp = fuse(&kg, &dl_answers(&dl), FusionPolicy::default());
        let keys: Vec<String> = resp.answers().iter().map(|t| t.trim().to_lowercase()).collect();
        let ctx = format!("case {case}: kg={kg:?} dl={dl:?}");
        ensure!(resp.items.len() <= 10, "{ctx}: too many items");
        ensure!(resp.count(Source::Kg) <= 5, "{ctx}: KG over quota");
        let first_dl = resp.items.iter().position(|i| i.source == Source::Dl).unwrap_or(resp.items.len());
        ensure!(resp.items[first_dl..].iter().all(|i| i.source == Source::Dl), "{ctx}: KG after DL");
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        ensure!(sorted.len() == keys.len(), "{ctx}: duplicate answers {keys:?}");
        let distinct_kg = {
            let mut k: Vec<String> = kg.iter().map(|t| t.trim().to_lowercase()).collect();
            k.sort();
            k.dedup();
            k.len()
        };
        ensure!(resp.count(Source::Kg) == distinct_kg.min(5), "{ctx}: KG slots not filled");
    }
    Ok(format!("{cases} random cases with deduplication"))
}

// ---- metrics ----

pub struct ExactCase {
    pub preds: Vec<String>,
    pub gold: Vec<String>,
    pub em: f64,
    pub er: f64,
}

fn case(preds: &[&str], gold: &[&str], em: f64, er: f64) -> ExactCase {
    let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
    ExactCase { preds: own(preds), gold: own(gold), em, er }
}

pub fn exact_truth_table() -> Vec<ExactCase> {
    let g15: Vec<String> = labels("g", 15);
    let g: Vec<&str> = g15.iter().map(String::as_str).collect();
    let mut seven_hits: Vec<&str> = g[..7].to_vec();
    seven_hits.extend(["x0", "x1", "x2"]);
    let late: Vec<&str> = ["x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9", "g0"].to_vec();
    vec![
        case(&["a"], &["a"], 1.0, 1.0),
        case(&["b", "a"], &["a"], 0.0, 1.0),
        case(&[], &["a"], 0.0, 0.0),
        case(&["a"], &[], 0.0, 0.0),
        case(&["A"], &["a"], 0.0, 0.0),
        case(&[" a\n"], &["a"], 1.0, 1.0),
        case(&["a", "b"], &["a", "b", "c", "d"], 1.0, 0.5),
        case(&["b"], &["a", "b"], 1.0, 0.5),
        case(&["a"], &["a", "a"], 1.0, 1.0),
        case(&["a", "a"], &["a", "b"], 1.0, 0.5),
        case(&seven_hits, &g, 1.0, 0.7),
        case(&g[..10], &g, 1.0, 1.0),
        case(&g, &g, 1.0, 1.0),
        case(&late, &["g0"], 0.0, 0.0),
        case(&["x", "y", "z"], &["a", "b"], 0.0, 0.0),
    ]
}

pub fn exact_metrics() -> Check {
    let table = exact_truth_table();
    for (i, c) in table.iter().enumerate() {
        let (em, er) = (exact_match(&c.preds, &c.gold), exact_recall(&c.preds, &c.gold));
        ensure!(em == c.em && (er - c.er).abs() < 1e-12, "case {i}: preds={:?} gold={:?} gave EM {em} ER {er}", c.preds, c.gold);
    }
    let ratio = accuracy_ratio(83, 120).map_err(|e| e.to_string())?;
    ensure!((ratio - 0.6917).abs() <= 0.0005, "accuracy_ratio(83, 120) = {ratio}");
    ensure!(accuracy_ratio(1, 0).is_err() && accuracy_ratio(5, 4).is_err(), "accuracy_ratio accepted a bad count");
    Ok(format!("{} truth-table rows, accuracy_ratio(83, 120) = {ratio:.4}", table.len()))
}

const PHRASES: &[&str] = &[
    "landing gear collapse",
    "landing gear collapsed",
    "collapse of the landing gear",
    "fuel exhaustion",
    "fuel starvation",
    "loss of directional control",
    "directional control not maintained",
    "crosswind",
    "gusty crosswind",
    "carburetor ice",
    "inadequate preflight inspection",
    "preflight inspection",
];

fn unit(provider: &EmbeddingProvider, s: &str) -> Vec<f64> {
    let v: Vec<f64> = provider.embed(s).unwrap().into();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| if n > 0.0 { x / n } else { 0.0 }).collect()
}

/// Semantic metrics against definitions evaluated from a full pairwise
/// cosine table over random subsets of aviation phrases.
pub fn semantic_metrics(cases: usize, tau: f64) -> Check {
    let provider = EmbeddingProvider::default();
    let vecs: Vec<Vec<f64>> = PHRASES.iter().map(|p| unit(&provider, p)).collect();
    let cos = |i: usize, j: usize| vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).sum::<f64>();
    let near_pairs =
        (0..PHRASES.len()).flat_map(|i| (0..i).map(move |j| (i, j))).filter(|&(i, j)| cos(i, j) >= tau).count();
    ensure!(near_pairs > 0, "no distinct phrase pair reaches tau = {tau}; the table tests nothing");

    let mut rng = StdRng::seed_from_u64(23);
    let (mut acc_hits, mut partial) = (0, 0);
    for case in 0..cases {
        let (np, ng) = (rng.gen_range(0..14), rng.gen_range(0..5));
        let mut draw = |n: usize| -> Vec<usize> { (0..n).map(|_| rng.gen_range(0..PHRASES.len())).collect() };
        let p = draw(np);
        let mut g = draw(ng);
        let preds: Vec<&str> = p.iter().map(|&i| PHRASES[i]).collect();
        let gold: Vec<&str> = g.iter().map(|&i| PHRASES[i]).collect();
        g.sort();
        g.dedup();
        let top: Vec<usize> = p.iter().copied().take(10).collect();
        let matched = g.iter().filter(|&&gi| top.iter().any(|&pi| cos(pi, gi) >= tau)).count();
        let want_acc = if matched > 0 { 1.0 } else { 0.0 };
        let want_rec = if g.is_empty() { 0.0 } else { matched as f64 / g.len().min(10) as f64 };
        let acc = semantic_accuracy(&preds, &gold, &provider, tau).map_err(|e| e.to_string())?;
        let rec = semantic_recall(&preds, &gold, &provider, tau).map_err(|e| e.to_string())?;
        ensure!(acc == want_acc, "case {case}: preds={preds:?} gold={gold:?} accuracy {acc}, table says {want_acc}");
        ensure!((rec - want_rec).abs() < 1e-12, "case {case}: preds={preds:?} gold={gold:?} recall {rec}, table says {want_rec}");
        acc_hits += usize::from(acc == 1.0);
        partial += usize::from(rec > 0.0 && rec < 1.0);
    }
    ensure!(acc_hits > 0 && acc_hits < cases && partial > 0, "degenerate draw: {acc_hits} hits, {partial} partial");
    ensure!(semantic_accuracy(&["a"], &["a"], &provider, 0.0).is_err(), "tau = 0 accepted");
    Ok(format!("{cases} cases over a {}x{} cosine table, {near_pairs} near pairs at tau = {tau}", PHRASES.len(), PHRASES.len()))
}

// ---- BM25 ----

fn passage(text: &str) -> Passage {
    Passage { heading: "Analysis".into(), text: text.into(), report_id: "R".into() }
}

/// Three passages whose scores for "engine failure" were worked out by hand:
/// N = 3, df = 2 for both terms, lengths 3, 5, 2, avgdl = 10/3.
pub fn bm25_hand_fixture() -> (Vec<Passage>, [f64; 3]) {
    (
        vec![passage("engine failure during climb"), passage("total engine failure engine fire"), passage("fuel exhaustion")],
        [0.980_102_354_825_230_8, 0.956_771_409_650_921_2, 0.0],
    )
}

const WORDS: &[&str] =
    &["engine", "fuel", "gear", "wing", "pilot", "runway", "tank", "stall", "bird", "wind", "gust", "flap", "brake", "tire"];

pub fn bm25(corpora: usize) -> Check {
    let (docs, expected) = bm25_hand_fixture();
    let idx = build_index(docs);
    let q = terms("engine failure");
    for (i, e) in expected.iter().enumerate() {
        let got = bm25_score(&idx, &q, i, Bm25Params::default()).map_err(|e| e.to_string())?;
        ensure!((got - e).abs() < 1e-6, "fixture passage {i}: {got} vs hand value {e}");
    }

    let mut rng = StdRng::seed_from_u64(42);
    for case in 0..corpora {
        let corpus: Vec<Passage> = (0..rng.gen_range(1..15))
            .map(|_| {
                let n = rng.gen_range(1..12);
                passage(&(0..n).map(|_| *WORDS.choose(&mut rng).unwrap()).collect::<Vec<_>>().join(" "))
            })
            .collect();
        let q: Vec<&str> = (0..rng.gen_range(1..4)).map(|_| *WORDS.choose(&mut rng).unwrap()).collect();
        let q = q.join(" ");
        let k = rng.gen_range(1..8);
        let docs: Vec<Vec<String>> = corpus.iter().map(|d| terms(&d.text)).collect();
        let scores = bm25_reference(&docs, &terms(&q), 1.2, 0.75);
        let mut order: Vec<usize> = (0..docs.len()).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        order.truncate(k);

        let got = retrieve_bm25(&build_index(corpus), &q, k, Bm25Params::default());
        let got_idx: Vec<usize> = got.iter().map(|s| s.index).collect();
        ensure!(got_idx == order, "corpus {case}, query {q:?}: order {got_idx:?}, full scan {order:?}");
        for s in &got {
            ensure!((s.score - scores[s.index]).abs() < 1e-9, "corpus {case}: score {} vs {}", s.score, scores[s.index]);
        }
        ensure!(got.iter().enumerate().all(|(i, s)| s.rank == i + 1), "corpus {case}: ranks not 1..k");
    }
    Ok(format!("3 hand scores to 1e-6, {corpora} random corpora"))
}

// ---- NL2SPARQL goldens ----

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct SparqlGolden {
    pub question: String,
    pub qtype: String,
    pub query: Option<String>,
    pub answers: Vec<String>,
}

pub fn load_sparql_goldens() -> Vec<SparqlGolden> {
    serde_json::from_str(&std::fs::read_to_string(fixtures().join("golden/sparql.json")).unwrap()).unwrap()
}

fn pattern_count(query: &str) -> usize {
    let body = query.rsplit_once('{').map_or("", |(_, b)| b);
    body.split(" . ").count()
}

pub fn nl2sparql_goldens() -> Check {
    let engine = fixture_engine();
    let goldens = load_sparql_goldens();
    for g in &goldens {
        let t = engine.kgqa().translate(&g.question, engine.graph()).map_err(|e| format!("{:?}: {e}", g.question))?;
        ensure!(t.qtype.to_string() == g.qtype, "{:?}: type {} vs frozen {}", g.question, t.qtype, g.qtype);
        ensure!(t.query_text == g.query, "{:?}: query changed\n  got  {:?}\n  want {:?}", g.question, t.query_text, g.query);
        ensure!(t.answers == g.answers, "{:?}: answers {:?} vs frozen {:?}", g.question, t.answers, g.answers);
    }
    let answered: Vec<&SparqlGolden> = goldens.iter().filter(|g| g.query.is_some()).collect();
    ensure!(answered.len() >= 15, "only {} questions map to SPARQL", answered.len());
    let has = |qtype: &str| answered.iter().any(|g| g.qtype == qtype);
    ensure!(has("count") && has("boolean"), "missing a Count or Boolean golden");
    ensure!(
        answered.iter().any(|g| g.qtype == "list" && pattern_count(g.query.as_deref().unwrap()) == 1),
        "no single-hop List golden"
    );
    let conj = answered
        .iter()
        .find(|g| g.question.contains("operated by") && g.question.contains("manufactured by") && g.question.contains(" and "))
        .ok_or("no operated-by/manufactured-by conjunction golden")?;
    ensure!(pattern_count(conj.query.as_deref().unwrap()) == 2, "conjunction query has {} patterns", pattern_count(conj.query.as_deref().unwrap()));
    ensure!(conj.answers == ["ERA05FA112"], "conjunction answered {:?}", conj.answers);
    let abstained = goldens.iter().filter(|g| g.query.is_none() && g.answers.is_empty()).count();
    ensure!(abstained >= 2, "only {abstained} abstentions");
    Ok(format!("{} frozen queries, {abstained} abstentions, conjunction -> {}", answered.len(), conj.answers[0]))
}

// ---- term extraction and event mapping ----

fn doc(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

fn score_of(scores: &[aeroqa::ontology::TermScore], term: &str) -> Option<f64> {
    scores.iter().find(|s| s.text() == term).map(|s| s.score)
}

pub const DRAGGED_WING: &str = "DRAGGED WING, ROTOR, POD, FLOAT OR TAIL/SKID";

pub fn term_extraction() -> Check {
    let plain = cvalue(&vec![doc("landing gear"); 4], 4).map_err(|e| e.to_string())?;
    let s = score_of(&plain, "landing gear").ok_or("landing gear missing")?;
    ensure!((s - 4.0).abs() < 1e-9, "non-nested C-value {s}, hand value 4.0");

    let mut corpus = vec![doc("left landing gear")];
    corpus.extend(vec![doc("landing gear"); 3]);
    let nested = cvalue(&corpus, 4).map_err(|e| e.to_string())?;
    let s = score_of(&nested, "landing gear").ok_or("landing gear missing")?;
    ensure!((s - 3.0).abs() < 1e-9, "nested C-value {s}, hand value 3.0");
    ensure!(nested.iter().all(|t| t.term.len() >= 2), "unigram candidate in C-value output");

    let tf = tfidf(&[doc("gear gear engine"), doc("engine fuel")]).map_err(|e| e.to_string())?;
    let s = score_of(&tf, "gear").ok_or("gear missing")?;
    ensure!((s - 2.0 * 2f64.ln()).abs() < 1e-9 && (s - 1.3863).abs() < 1e-4, "tf-idf {s}, hand value 2 ln 2");

    let tree = load_taxonomy(&std::fs::read_to_string(fixtures().join("taxonomy.txt")).unwrap()).map_err(|e| e.to_string())?;
    let m = map_event_keywords(DRAGGED_WING, &tree).map_err(|e| e.to_string())?;
    ensure!(m.path.leaf() == "Dragged wing/rotor/pod/float", "mapped to {}", m.path.render());
    Ok(format!("C-value 4.0 / 3.0, tf-idf {s:.4}, event -> {}", m.path.render()))
}

// ---- end to end ----

pub struct Complementarity {
    pub kg_mean: f64,
    pub dl_mean: f64,
    pub hybrid_mean: f64,
    pub kg_only: Vec<usize>,
    pub dl_only: Vec<usize>,
}

pub fn complementarity_scores() -> Complementarity {
    let engine = fixture_engine();
    let tests = load_testset(&fixtures().join("testset.json")).unwrap();
    let run = |m| evaluate(&engine.system(m), &tests, engine.provider(), 0.8).unwrap();
    let (kg, dl, hy) = (run(SystemMode::Kg), run(SystemMode::Dl), run(SystemMode::Hybrid));
    let acc = |r: &aeroqa::fusion_eval::EvalReport, i: usize| r.instances[i].scores.semantic_accuracy;
    let n = tests.len();
    Complementarity {
        kg_mean: kg.mean.semantic_accuracy,
        dl_mean: dl.mean.semantic_accuracy,
        hybrid_mean: hy.mean.semantic_accuracy,
        kg_only: (0..n).filter(|&i| acc(&kg, i) == 1.0 && acc(&dl, i) == 0.0).collect(),
        dl_only: (0..n).filter(|&i| acc(&dl, i) == 1.0 && acc(&kg, i) == 0.0).collect(),
    }
}

pub fn complementarity() -> Check {
    let c = complementarity_scores();
    let means = format!("SemAcc KG {:.3}, DL {:.3}, hybrid {:.3}", c.kg_mean, c.dl_mean, c.hybrid_mean);
    ensure!(c.hybrid_mean >= c.kg_mean && c.hybrid_mean >= c.dl_mean, "hybrid below a single module: {means}");
    ensure!(!c.kg_only.is_empty(), "no question answered only by KGQA ({means})");
    ensure!(!c.dl_only.is_empty(), "no question answered only by DLQA ({means})");
    Ok(format!("{means}; KG-only {:?}, DL-only {:?}", c.kg_only, c.dl_only))
}
