mod common;

use aeroqa::embeddings::EmbeddingProvider;
use aeroqa::ingest::Passage;
use aeroqa::retrieval::{build_index, retrieve_bm25, retrieve_dense, Bm25Params, DenseIndex};
use common::checks;

fn p(text: &str) -> Passage {
    Passage { heading: "Analysis".into(), text: text.into(), report_id: "R".into() }
}

#[test]
fn bm25_matches_hand_values_and_full_scan() {
    checks::bm25(200).unwrap();
}

#[test]
fn hand_fixture_ranks_in_score_order() {
    let (docs, _) = checks::bm25_hand_fixture();
    let top = retrieve_bm25(&build_index(docs), "engine failure", 3, Bm25Params::default());
    assert_eq!(top.iter().map(|s| s.index).collect::<Vec<_>>(), [0, 1, 2]);
}

#[test]
fn dense_identical_text_first() {
    let corpus = vec![p("fuel exhaustion over the lake"), p("left main gear collapsed on landing"), p("bird struck the windshield")];
    let h = EmbeddingProvider::default();
    for (i, c) in corpus.iter().enumerate() {
        let top = retrieve_dense(&corpus, &format!("{} {}", c.heading, c.text), &h, 1).unwrap();
        assert_eq!(top[0].index, i);
    }
}

#[test]
fn dense_index_agrees_with_one_shot_retrieval() {
    let (docs, _) = checks::bm25_hand_fixture();
    let h = EmbeddingProvider::default();
    let idx = DenseIndex::build(docs.clone(), &h).unwrap();
    for q in ["engine failure", "fuel", "climb"] {
        assert_eq!(idx.retrieve(q, &h, 3).unwrap(), retrieve_dense(&docs, q, &h, 3).unwrap());
    }
}
