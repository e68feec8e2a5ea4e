use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::mentions::{Mention, MentionKind};
use crate::embeddings::{cosine, EmbeddingProvider, Vector};
use crate::error::Result;
use crate::text::{split_identifier, terms};
use crate::triplestore::{ns, Graph, Iri, Term};

pub const DEFAULT_THETA_LINK: f64 = 0.6;
pub const DEFAULT_TOP_LINKS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkCandidate {
    pub mention: Mention,
    pub kg_term: Iri,
    pub label: String,
    pub similarity: f64,
}

/// Text actually embedded for linking: the normalized content terms, so that
/// "operated" meets "operatedBy" and "caused" meets "cause". Falls back to the
/// lowercased text when nothing survives stopword removal.
pub fn link_key(text: &str) -> String {
    let t = terms(text);
    if t.is_empty() {
        text.trim().to_lowercase()
    } else {
        t.join(" ")
    }
}

/// Readable form of a relation IRI: its local name split into words.
pub fn relation_label(iri: &Iri) -> String {
    split_identifier(iri.local_name())
}

#[derive(Debug, Clone)]
struct Entry {
    iri: Iri,
    label: String,
    /// One vector per alternative surface; similarity is the best of them.
    vectors: Vec<Vector>,
}

/// KG vocabulary embedded once: individuals by label, relations by every
/// contiguous word span of their split local name.
#[derive(Debug, Clone)]
pub struct Linker {
    entities: Vec<Entry>,
    relations: Vec<Entry>,
    provider: EmbeddingProvider,
}

fn spans(label: &str) -> Vec<String> {
    let words: Vec<&str> = label.split_whitespace().collect();
    let mut keys: Vec<String> = Vec::new();
    for s in 0..words.len() {
        for e in s + 1..=words.len() {
            let k = terms(&words[s..e].join(" ")).join(" ");
            if !k.is_empty() && !keys.contains(&k) {
                keys.push(k);
            }
        }
    }
    keys
}

impl Linker {
    pub fn new(kg: &Graph, provider: &EmbeddingProvider) -> Result<Self> {
        let mut individuals: BTreeMap<Iri, String> = BTreeMap::new();
        let is_individual = |i: &Iri| i.in_namespace(ns::INST) || i.in_namespace(ns::ACC);
        for s in kg.subjects().filter(|i| is_individual(i)) {
            individuals.entry(s.clone()).or_insert_with(|| kg.display_name(&Term::Iri(s.clone())));
        }
        for o in kg.objects() {
            if let Term::Iri(i) = o {
                if is_individual(i) {
                    individuals.entry(i.clone()).or_insert_with(|| kg.display_name(o));
                }
            }
        }
        let relations: Vec<(Iri, String, Vec<String>)> = kg
            .predicates()
            .filter(|p| p.in_namespace(ns::REL))
            .map(|p| {
                let label = relation_label(p);
                let keys = spans(&label);
                (p.clone(), label, keys)
            })
            .collect();

        let mut texts: Vec<String> = individuals.values().map(|l| link_key(l)).collect();
        for (_, _, keys) in &relations {
            texts.extend(keys.iter().cloned());
        }
        let mut vectors = provider.embed_batch(&texts)?.into_iter();

        let entities = individuals
            .into_iter()
            .map(|(iri, label)| Entry { iri, label, vectors: vec![vectors.next().expect("one vector per text")] })
            .collect();
        let relations = relations
            .into_iter()
            .map(|(iri, label, keys)| Entry { iri, label, vectors: vectors.by_ref().take(keys.len()).collect() })
            .collect();
        Ok(Linker { entities, relations, provider: provider.clone() })
    }

    pub fn provider(&self) -> &EmbeddingProvider {
        &self.provider
    }

    /// Number of linkable individuals and relations.
    pub fn vocabulary_size(&self) -> (usize, usize) {
        (self.entities.len(), self.relations.len())
    }

    /// Every vocabulary entry of the mention's kind with its similarity,
    /// best first, ties by IRI.
    pub fn scores(&self, mention: &Mention) -> Result<Vec<(Iri, String, f64)>> {
        let v = self.provider.embed(&link_key(&mention.surface))?;
        let space = match mention.kind_hint {
            MentionKind::EntityLike => &self.entities,
            MentionKind::RelationLike => &self.relations,
        };
        let mut out = Vec::with_capacity(space.len());
        for e in space {
            let mut best = f64::NEG_INFINITY;
            for ev in &e.vectors {
                best = best.max(cosine(&v, ev)?);
            }
            if best.is_finite() {
                out.push((e.iri.clone(), e.label.clone(), best));
            }
        }
        out.sort_by(|a, b| b.2.total_cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
        Ok(out)
    }

    /// Up to `top_n` candidates per mention with similarity at least `theta`.
    pub fn link(&self, mentions: &[Mention], theta: f64, top_n: usize) -> Result<Vec<LinkCandidate>> {
        let mut out = Vec::new();
        for m in mentions {
            for (iri, label, similarity) in self.scores(m)?.into_iter().filter(|s| s.2 >= theta).take(top_n) {
                out.push(LinkCandidate { mention: m.clone(), kg_term: iri, label, similarity });
            }
        }
        Ok(out)
    }
}

/// One-shot linking; builds the vocabulary index on every call.
pub fn link(mentions: &[Mention], kg: &Graph, provider: &EmbeddingProvider, theta: f64) -> Result<Vec<LinkCandidate>> {
    Linker::new(kg, provider)?.link(mentions, theta, DEFAULT_TOP_LINKS)
}

/// N-gram tiling: a mention contained in a longer one whose best link is the
/// same term is dropped; the rest are chosen greedily by best similarity,
/// then length, then position, skipping any that overlap a chosen one.
/// Returns the candidates of the surviving mentions in question order.
pub fn resolve_mentions(links: &[LinkCandidate]) -> Vec<LinkCandidate> {
    // mentions in first-seen order with their best candidate
    let mut heads: Vec<(&Mention, &LinkCandidate)> = Vec::new();
    for c in links {
        match heads.iter_mut().find(|(m, _)| *m == &c.mention) {
            Some((_, best)) => {
                if c.similarity > best.similarity || (c.similarity == best.similarity && c.kg_term < best.kg_term) {
                    *best = c;
                }
            }
            None => heads.push((&c.mention, c)),
        }
    }
    let shadowed = |m: &Mention, top: &Iri| {
        heads.iter().any(|(other, ob)| other.len() > m.len() && other.contains(m) && &ob.kg_term == top)
    };
    let mut live: Vec<(&Mention, &LinkCandidate)> =
        heads.iter().filter(|(m, best)| !shadowed(m, &best.kg_term)).copied().collect();
    live.sort_by(|a, b| {
        b.1.similarity
            .total_cmp(&a.1.similarity)
            .then(b.0.len().cmp(&a.0.len()))
            .then(a.0.span.0.cmp(&b.0.span.0))
    });
    let mut chosen: Vec<&Mention> = Vec::new();
    for (m, _) in live {
        if chosen.iter().all(|c| !c.overlaps(m)) {
            chosen.push(m);
        }
    }
    chosen.sort_by_key(|m| m.span);
    chosen
        .into_iter()
        .flat_map(|m| links.iter().filter(move |c| &c.mention == m).cloned())
        .collect()
}
