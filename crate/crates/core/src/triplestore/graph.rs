use std::collections::{BTreeMap, BTreeSet};

use super::term::{ns, Iri, PrefixMap, Term, Triple};

/// In-memory triple set with SPO, POS and OSP indexes.
///
/// Iteration order everywhere is the term order (IRIs before literals, then
/// lexicographic), so results do not depend on insertion history.
#[derive(Debug, Clone)]
pub struct Graph {
    spo: BTreeMap<Iri, BTreeMap<Iri, BTreeSet<Term>>>,
    pos: BTreeMap<Iri, BTreeMap<Term, BTreeSet<Iri>>>,
    osp: BTreeMap<Term, BTreeMap<Iri, BTreeSet<Iri>>>,
    len: usize,
    prefixes: PrefixMap,
}

impl Default for Graph {
    fn default() -> Self {
        Graph::new()
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.spo == other.spo
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Graph {
            spo: BTreeMap::new(),
            pos: BTreeMap::new(),
            osp: BTreeMap::new(),
            len: 0,
            prefixes: ns::default_prefixes(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    /// Returns false when the triple was already present.
    pub fn insert(&mut self, t: Triple) -> bool {
        let Triple { subject, predicate, object } = t;
        let fresh = self
            .spo
            .entry(subject.clone())
            .or_default()
            .entry(predicate.clone())
            .or_default()
            .insert(object.clone());
        if !fresh {
            return false;
        }
        self.pos.entry(predicate.clone()).or_default().entry(object.clone()).or_default().insert(subject.clone());
        self.osp.entry(object).or_default().entry(subject).or_default().insert(predicate);
        self.len += 1;
        true
    }

    pub fn extend<I: IntoIterator<Item = Triple>>(&mut self, triples: I) {
        for t in triples {
            self.insert(t);
        }
    }

    pub fn contains(&self, s: &Iri, p: &Iri, o: &Term) -> bool {
        self.spo.get(s).and_then(|m| m.get(p)).is_some_and(|os| os.contains(o))
    }

    /// All triples in SPO order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, pm)| {
            pm.iter().flat_map(move |(p, os)| os.iter().map(move |o| Triple::from_iris(s.clone(), p.clone(), o.clone())))
        })
    }

    /// Triples matching a pattern where `None` is a wildcard, served from
    /// whichever index has the bound positions as a key prefix.
    pub fn matches(&self, s: Option<&Iri>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
        let mk = |s: &Iri, p: &Iri, o: &Term| Triple::from_iris(s.clone(), p.clone(), o.clone());
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                if self.contains(s, p, o) {
                    vec![mk(s, p, o)]
                } else {
                    Vec::new()
                }
            }
            (Some(s), Some(p), None) => self
                .spo
                .get(s)
                .and_then(|m| m.get(p))
                .map(|os| os.iter().map(|o| mk(s, p, o)).collect())
                .unwrap_or_default(),
            (Some(s), None, None) => self
                .spo
                .get(s)
                .map(|pm| pm.iter().flat_map(|(p, os)| os.iter().map(move |o| mk(s, p, o))).collect())
                .unwrap_or_default(),
            (None, Some(p), Some(o)) => self
                .pos
                .get(p)
                .and_then(|m| m.get(o))
                .map(|ss| ss.iter().map(|s| mk(s, p, o)).collect())
                .unwrap_or_default(),
            (None, Some(p), None) => self
                .pos
                .get(p)
                .map(|om| om.iter().flat_map(|(o, ss)| ss.iter().map(move |s| mk(s, p, o))).collect())
                .unwrap_or_default(),
            (None, None, Some(o)) => self
                .osp
                .get(o)
                .map(|sm| sm.iter().flat_map(|(s, ps)| ps.iter().map(move |p| mk(s, p, o))).collect())
                .unwrap_or_default(),
            (Some(s), None, Some(o)) => self
                .osp
                .get(o)
                .and_then(|m| m.get(s))
                .map(|ps| ps.iter().map(|p| mk(s, p, o)).collect())
                .unwrap_or_default(),
            (None, None, None) => self.iter().collect(),
        }
    }

    /// First literal attached through `avi:label`.
    pub fn label(&self, iri: &Iri) -> Option<&str> {
        let label = Iri::new(ns::LABEL).ok()?;
        self.spo.get(iri)?.get(&label)?.iter().find_map(|t| match t {
            Term::Literal(l) => Some(&**l),
            Term::Iri(_) => None,
        })
    }

    /// Human-readable name: the label if present, otherwise the IRI local
    /// name with `_` turned back into spaces. Literals render as themselves.
    pub fn display_name(&self, term: &Term) -> String {
        match term {
            Term::Literal(l) => l.to_string(),
            Term::Iri(i) => match self.label(i) {
                Some(l) => l.to_string(),
                None => percent_encoding::percent_decode_str(i.local_name()).decode_utf8_lossy().replace('_', " "),
            },
        }
    }

    /// Subjects carrying a label, with that label.
    pub fn labeled_subjects(&self) -> Vec<(Iri, String)> {
        let Ok(label) = Iri::new(ns::LABEL) else { return Vec::new() };
        self.pos
            .get(&label)
            .map(|om| {
                let mut out: Vec<(Iri, String)> = Vec::new();
                for (o, ss) in om {
                    if let Term::Literal(l) = o {
                        out.extend(ss.iter().map(|s| (s.clone(), l.to_string())));
                    }
                }
                out.sort();
                out.dedup_by(|a, b| a.0 == b.0);
                out
            })
            .unwrap_or_default()
    }

    /// Distinct predicates in term order.
    pub fn predicates(&self) -> impl Iterator<Item = &Iri> {
        self.pos.keys()
    }

    pub fn subjects(&self) -> impl Iterator<Item = &Iri> {
        self.spo.keys()
    }

    pub fn objects(&self) -> impl Iterator<Item = &Term> {
        self.osp.keys()
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn set_semantics() {
        let mut g = Graph::new();
        let t = Triple::from_iris(iri("acc/A1"), iri("rel/p"), Term::literal("x"));
        assert!(g.insert(t.clone()));
        assert_eq!(g.len(), 1);
        assert!(!g.insert(t));
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn worked_finding_triple() {
        let mut g = Graph::new();
        let t = Triple::from_iris(
            iri("inst/Directional_control"),
            iri("rel/isCausedDueToAircraftIssue"),
            Term::Iri(iri("inst/Not_attained")),
        );
        g.insert(t.clone());
        assert!(g.contains(&t.subject, &t.predicate, &t.object));
    }

    #[test]
    fn every_access_path_agrees_with_scan() {
        let ids = ["a", "b", "c"];
        let mut g = Graph::new();
        for s in ids {
            for p in ["p", "q"] {
                for o in ids {
                    if (s.len() + p.len() + o.as_bytes()[0] as usize).is_multiple_of(2) {
                        g.insert(Triple::from_iris(iri(s), iri(p), Term::Iri(iri(o))));
                    }
                }
            }
        }
        let all: Vec<Triple> = g.iter().collect();
        for s in [None, Some(iri("a"))] {
            for p in [None, Some(iri("q"))] {
                for o in [None, Some(Term::Iri(iri("c")))] {
                    let mut got = g.matches(s.as_ref(), p.as_ref(), o.as_ref());
                    got.sort();
                    let want: Vec<Triple> = all
                        .iter()
                        .filter(|t| {
                            s.as_ref().is_none_or(|x| *x == t.subject)
                                && p.as_ref().is_none_or(|x| *x == t.predicate)
                                && o.as_ref().is_none_or(|x| *x == t.object)
                        })
                        .cloned()
                        .collect();
                    assert_eq!(got, want);
                }
            }
        }
    }

    #[test]
    fn display_name_prefers_label() {
        let mut g = Graph::new();
        let i = iri("http://x/inst/Not_attained");
        assert_eq!(g.display_name(&Term::Iri(i.clone())), "Not attained");
        g.insert(Triple::from_iris(i.clone(), iri(ns::LABEL), Term::literal("Not attained!")));
        assert_eq!(g.display_name(&Term::Iri(i)), "Not attained!");
    }
}
