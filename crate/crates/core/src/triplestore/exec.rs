use std::collections::HashSet;

use super::graph::Graph;
use super::sparql::{PatternTerm, Query, QueryForm, TriplePattern, Variable};
use super::term::{Iri, Term};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryResult {
    Boolean(bool),
    /// Distinct bindings of the projected variable in first-derivation order.
    Terms(Vec<Term>),
    Count(u64),
}

/// One solution: a term for every variable, in [`Solutions::variables`] order.
pub type Binding = Vec<Term>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solutions {
    pub variables: Vec<Variable>,
    pub rows: Vec<Binding>,
}

/// Variables in order of first appearance, left to right.
pub fn pattern_variables(patterns: &[TriplePattern]) -> Vec<Variable> {
    let mut vars: Vec<Variable> = Vec::new();
    for p in patterns {
        for v in p.variables() {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
    }
    vars
}

struct Matcher<'g> {
    graph: &'g Graph,
    patterns: Vec<[Slot; 3]>,
    nvars: usize,
    stop_after_first: bool,
}

#[derive(Clone)]
enum Slot {
    Fixed(Term),
    Var(usize),
}

impl Matcher<'_> {
    fn resolve<'a>(slot: &'a Slot, binding: &'a [Option<Term>]) -> Option<&'a Term> {
        match slot {
            Slot::Fixed(t) => Some(t),
            Slot::Var(i) => binding[*i].as_ref(),
        }
    }

    /// Index-nested-loop join, patterns left to right.
    fn solve(&self, depth: usize, binding: &mut Vec<Option<Term>>, out: &mut Vec<Binding>) {
        if self.stop_after_first && !out.is_empty() {
            return;
        }
        if depth == self.patterns.len() {
            out.push(binding.iter().map(|t| t.clone().expect("every variable bound at full depth")).collect());
            return;
        }
        let [s, p, o] = &self.patterns[depth];
        let s_val = Self::resolve(s, binding).cloned();
        let p_val = Self::resolve(p, binding).cloned();
        let o_val = Self::resolve(o, binding).cloned();
        let as_iri = |t: &Option<Term>| -> Result<Option<Iri>, ()> {
            match t {
                None => Ok(None),
                Some(Term::Iri(i)) => Ok(Some(i.clone())),
                Some(Term::Literal(_)) => Err(()),
            }
        };
        // a literal can never be a subject or predicate
        let (Ok(s_iri), Ok(p_iri)) = (as_iri(&s_val), as_iri(&p_val)) else { return };
        for t in self.graph.matches(s_iri.as_ref(), p_iri.as_ref(), o_val.as_ref()) {
            let mut assigned: Vec<usize> = Vec::new();
            let mut ok = true;
            for (slot, value) in [(s, Term::Iri(t.subject)), (p, Term::Iri(t.predicate)), (o, t.object)] {
                if let Slot::Var(i) = slot {
                    match &binding[*i] {
                        Some(existing) => {
                            if *existing != value {
                                ok = false;
                                break;
                            }
                        }
                        None => {
                            binding[*i] = Some(value);
                            assigned.push(*i);
                        }
                    }
                }
            }
            if ok {
                self.solve(depth + 1, binding, out);
            }
            for i in assigned {
                binding[i] = None;
            }
            if self.stop_after_first && !out.is_empty() {
                return;
            }
        }
    }
}

fn compile<'g>(graph: &'g Graph, patterns: &[TriplePattern], stop_after_first: bool) -> (Matcher<'g>, Vec<Variable>) {
    let vars = pattern_variables(patterns);
    let slot = |pt: &PatternTerm| match pt {
        PatternTerm::Term(t) => Slot::Fixed(t.clone()),
        PatternTerm::Var(v) => Slot::Var(vars.iter().position(|x| x == v).expect("collected above")),
    };
    let compiled = patterns.iter().map(|p| [slot(&p.subject), slot(&p.predicate), slot(&p.object)]).collect();
    (Matcher { graph, patterns: compiled, nvars: vars.len(), stop_after_first }, vars)
}

/// Every solution of the basic graph pattern in derivation order.
pub fn solve(graph: &Graph, patterns: &[TriplePattern]) -> Solutions {
    let (m, variables) = compile(graph, patterns, false);
    let mut rows = Vec::new();
    m.solve(0, &mut vec![None; m.nvars], &mut rows);
    Solutions { variables, rows }
}

/// Existence check for a basic graph pattern.
pub fn ask(graph: &Graph, patterns: &[TriplePattern]) -> bool {
    let (m, _) = compile(graph, patterns, true);
    let mut rows = Vec::new();
    m.solve(0, &mut vec![None; m.nvars], &mut rows);
    !rows.is_empty()
}

pub fn execute(graph: &Graph, query: &Query) -> Result<QueryResult> {
    query.validate()?;
    let distinct_projection = |v: &Variable| {
        let sol = solve(graph, &query.patterns);
        let idx = sol.variables.iter().position(|x| x == v).expect("validated projection");
        let mut seen = HashSet::new();
        sol.rows.into_iter().filter_map(|mut r| {
            let t = r.swap_remove(idx);
            seen.insert(t.clone()).then_some(t)
        }).collect::<Vec<_>>()
    };
    Ok(match &query.form {
        QueryForm::Ask => QueryResult::Boolean(ask(graph, &query.patterns)),
        QueryForm::SelectDistinct(v) => QueryResult::Terms(distinct_projection(v)),
        QueryForm::Count { var, .. } => QueryResult::Count(distinct_projection(var).len() as u64),
    })
}
