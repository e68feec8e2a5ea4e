use super::report::ReportRecord;
use crate::embeddings::EmbeddingProvider;
use crate::error::{Error, Result};
use crate::ontology::{enumerate_paths, map_event_embedding, map_event_keywords, TaxonomyTree};
use crate::triplestore::{mint, ns, Iri, Term, Triple};

pub const EVENTS_KEY: &str = "Events";

/// Maps each `;`-separated entry of the `Events` header onto the taxonomy and
/// emits the class chain (`rdfs:subClassOf` up to the root), an event
/// individual typed by the leaf class, and `acc --hasEvent--> event`.
///
/// Keyword matching is used unless an embedding provider is given. Keyword
/// matches with zero overlap are skipped rather than forced onto a path.
pub fn event_triples(record: &ReportRecord, tree: &TaxonomyTree, provider: Option<&EmbeddingProvider>) -> Result<Vec<Triple>> {
    let Some(raw) = record.field(EVENTS_KEY) else { return Ok(Vec::new()) };
    let label = Iri::new(ns::LABEL)?;
    let rdf_type = Iri::new(ns::RDF_TYPE)?;
    let subclass = Iri::new(ns::SUBCLASS_OF)?;
    let has_event = Iri::new(format!("{}hasEvent", ns::REL))?;
    let acc = mint(ns::ACC, &record.accident_number)?;
    let paths = enumerate_paths(tree);

    let mut out = Vec::new();
    for event in raw.split(';').map(str::trim).filter(|e| !e.is_empty()) {
        let mapped = match provider {
            Some(p) => map_event_embedding(event, &paths, p)?,
            None => match map_event_keywords(event, tree) {
                Ok(m) if m.score > 0.0 => m,
                Ok(_) | Err(Error::NoMention(_)) => {
                    log::debug!("{}: event {event:?} matches no taxonomy node", record.accident_number);
                    continue;
                }
                Err(e) => return Err(e),
            },
        };
        let mut parent: Option<Iri> = None;
        for l in mapped.path.labels() {
            let class = mint(ns::CLASS, l)?;
            out.push(Triple::from_iris(class.clone(), label.clone(), Term::literal(l)));
            if let Some(p) = parent.take() {
                out.push(Triple::from_iris(class.clone(), subclass.clone(), p));
            }
            parent = Some(class);
        }
        let leaf = parent.expect("paths have at least one label");
        let inst = mint(ns::INST, event)?;
        out.push(Triple::from_iris(inst.clone(), rdf_type.clone(), leaf));
        out.push(Triple::from_iris(inst.clone(), label.clone(), Term::literal(event)));
        out.push(Triple::from_iris(acc.clone(), has_event.clone(), inst));
    }
    Ok(out)
}
