use std::collections::BTreeSet;

use super::ast::Query;
use crate::dict::TypeDictionary;
use crate::error::Result;
use crate::graph::{Direction, SoftwareGraph, VertexId};

fn check(q: &Query, dict: &TypeDictionary) -> Result<()> {
    match q {
        Query::TypeIs(t) => dict.artifact_type(t.as_str()).map(drop),
        Query::IdGlob(_) => Ok(()),
        Query::And(a, b) | Query::Or(a, b) => {
            check(a, dict)?;
            check(b, dict)
        }
        Query::Not(a) => check(a, dict),
        Query::Step { traces, inner, .. } => {
            if let Some(ts) = traces {
                dict.check_trace_types(ts)?;
            }
            check(inner, dict)
        }
    }
}

/// The set of vertices satisfying `q`. Every type the query names must be in
/// the graph's dictionary.
pub fn eval_query(g: &SoftwareGraph, q: &Query) -> Result<BTreeSet<VertexId>> {
    check(q, g.dictionary())?;
    Ok(eval(g, q))
}

fn eval(g: &SoftwareGraph, q: &Query) -> BTreeSet<VertexId> {
    match q {
        Query::TypeIs(t) => g
            .vertices()
            .filter(|(_, ls)| ls.contains(t))
            .map(|(v, _)| v.clone())
            .collect(),
        Query::IdGlob(p) => g
            .vertex_ids()
            .filter(|v| p.matches(v.as_str()))
            .cloned()
            .collect(),
        Query::And(a, b) => {
            let a = eval(g, a);
            if a.is_empty() {
                return a;
            }
            &a & &eval(g, b)
        }
        Query::Or(a, b) => &eval(g, a) | &eval(g, b),
        Query::Not(a) => {
            let a = eval(g, a);
            g.vertex_ids().filter(|v| !a.contains(*v)).cloned().collect()
        }
        Query::Step {
            direction,
            traces,
            inner,
        } => {
            // Walk backwards from the vertices satisfying `inner`.
            let reverse = match direction {
                Direction::Out => Direction::In,
                Direction::In => Direction::Out,
                Direction::Both => Direction::Both,
            };
            let mut out = BTreeSet::new();
            for w in eval(g, inner) {
                for (t, v) in g.incident(w.as_str(), reverse) {
                    if traces.as_ref().is_none_or(|ts| ts.contains(t)) {
                        out.insert(v.clone());
                    }
                }
            }
            out
        }
    }
}
