//! Random generators and brute-force oracles shared by the integration tests.
//! The oracles only use the public read accessors of `SoftwareGraph`.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use swgraph::dict::{type_set, TypeSet};
use swgraph::graph::{Direction, SoftwareGraph, VertexId};
use swgraph::map::Compositions;
use swgraph::query::{Glob, Query};
use swgraph::{TypeDictionary, TypeName, ViewSpec};

pub const ARTIFACTS: &[&str] = &[
    "class", "method", "field", "interface", "module", "unit_test", "requirement", "library",
];
pub const TRACES: &[&str] = &["contain", "return", "call", "verify", "depend", "define"];

pub fn t(s: &str) -> TypeName {
    TypeName::new(s).unwrap()
}

pub fn dict_with_depend() -> TypeDictionary {
    let mut d = TypeDictionary::default();
    d.add_trace_type(t("depend"));
    d
}

pub fn random_subset<R: Rng>(rng: &mut R, pool: &[&str]) -> TypeSet {
    pool.iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(|s| t(s))
        .collect()
}

/// A valid graph with up to `max_v` vertices and up to `max_e` edge draws.
/// Labels and traces come from small pools so that views and steps hit.
pub fn random_graph<R: Rng>(rng: &mut R, max_v: usize, max_e: usize) -> SoftwareGraph {
    random_graph_over(rng, max_v, max_e, ARTIFACTS, TRACES)
}

pub fn random_graph_over<R: Rng>(
    rng: &mut R,
    max_v: usize,
    max_e: usize,
    artifacts: &[&str],
    traces: &[&str],
) -> SoftwareGraph {
    let mut g = SoftwareGraph::new(dict_with_depend());
    let n = rng.gen_range(0..=max_v);
    for i in 0..n {
        let k = rng.gen_range(1..=2);
        let labels: Vec<&str> = artifacts.choose_multiple(rng, k).copied().collect();
        g.add_vertex(&format!("v{i}"), labels).unwrap();
    }
    if n > 0 {
        let m = rng.gen_range(0..=max_e);
        for _ in 0..m {
            let a = format!("v{}", rng.gen_range(0..n));
            let b = format!("v{}", rng.gen_range(0..n));
            let tr = traces.choose(rng).unwrap();
            g.add_edge(&a, tr, &b).unwrap();
        }
    }
    g
}

/// Like [`random_graph`] but also varies the dictionary: extra types,
/// or a narrowed dictionary without the defaults.
pub fn random_graph_any_dict<R: Rng>(rng: &mut R, max_v: usize, max_e: usize) -> SoftwareGraph {
    let base = random_graph(rng, max_v, max_e);
    let (mut dict, labels, edges) = base.into_parts();
    match rng.gen_range(0..3) {
        0 => {}
        1 => {
            dict.add_artifact_type(t(&format!("extra{}", rng.gen_range(0..5))));
            dict.add_trace_type(t("x-link"));
        }
        _ => {
            let artifacts: Vec<&str> = ARTIFACTS.to_vec();
            let traces: Vec<&str> = TRACES.to_vec();
            dict = TypeDictionary::new(artifacts, traces).unwrap();
        }
    }
    SoftwareGraph::from_parts(dict, labels, edges)
}

pub fn random_view_spec<R: Rng>(rng: &mut R) -> ViewSpec {
    ViewSpec {
        artifact_types: random_subset(rng, ARTIFACTS),
        trace_types: random_subset(rng, TRACES),
    }
}

pub fn random_query<R: Rng>(rng: &mut R, depth: usize) -> Query {
    let leaf = depth <= 1 || rng.gen_bool(0.3);
    if leaf {
        return if rng.gen_bool(0.75) {
            Query::TypeIs(t(ARTIFACTS.choose(rng).unwrap()))
        } else {
            let pats = ["v1*", "v?", "*", "v1", "*3", "v2?"];
            Query::IdGlob(Glob::new(*pats.choose(rng).unwrap()))
        };
    }
    match rng.gen_range(0..4) {
        0 => Query::and(random_query(rng, depth - 1), random_query(rng, depth - 1)),
        1 => Query::or(random_query(rng, depth - 1), random_query(rng, depth - 1)),
        2 => Query::not(random_query(rng, depth - 1)),
        _ => {
            let dir = *[Direction::Out, Direction::In, Direction::Both].choose(rng).unwrap();
            let traces = rng
                .gen_bool(0.6)
                .then(|| random_subset(rng, TRACES))
                .filter(|s| !s.is_empty());
            Query::step(dir, traces, random_query(rng, depth - 1))
        }
    }
}

pub type EdgeTriple = (String, String, String);

pub fn edge_triples(g: &SoftwareGraph) -> BTreeSet<EdgeTriple> {
    g.edges()
        .map(|e| (e.source.to_string(), e.trace.to_string(), e.target.to_string()))
        .collect()
}

pub fn vertex_set(g: &SoftwareGraph) -> BTreeSet<String> {
    g.vertex_ids().map(|v| v.to_string()).collect()
}

pub fn strings(ids: &BTreeSet<VertexId>) -> BTreeSet<String> {
    ids.iter().map(|v| v.to_string()).collect()
}

/// Set-builder view: V' = {v | some label in A'}, L' = L ∩ (V' × A'),
/// E' = E ∩ (V' × T' × V').
pub fn view_oracle(
    g: &SoftwareGraph,
    spec: &ViewSpec,
) -> (BTreeSet<String>, BTreeSet<(String, String)>, BTreeSet<EdgeTriple>) {
    let mut vs = BTreeSet::new();
    let mut ls = BTreeSet::new();
    for (v, labels) in g.vertices() {
        for a in labels {
            if spec.artifact_types.contains(a) {
                vs.insert(v.to_string());
                ls.insert((v.to_string(), a.to_string()));
            }
        }
    }
    let es = edge_triples(g)
        .into_iter()
        .filter(|(s, tr, d)| {
            vs.contains(s) && vs.contains(d) && spec.trace_types.contains(tr.as_str())
        })
        .collect();
    (vs, ls, es)
}

pub fn label_pairs(g: &SoftwareGraph) -> BTreeSet<(String, String)> {
    g.vertices()
        .flat_map(|(v, ls)| ls.iter().map(move |a| (v.to_string(), a.to_string())))
        .collect()
}

/// Naive fixpoint: scan all edge pairs until nothing new appears.
pub fn closure_oracle(edges: &BTreeSet<EdgeTriple>, rules: &Compositions) -> BTreeSet<EdgeTriple> {
    let rules: BTreeMap<(String, String), String> = rules
        .iter()
        .map(|((x, y), z)| ((x.to_string(), y.to_string()), z.to_string()))
        .collect();
    let mut cur = edges.clone();
    loop {
        let mut next = cur.clone();
        for (u, x, v) in &cur {
            for (v2, y, w) in &cur {
                if v == v2 {
                    if let Some(z) = rules.get(&(x.clone(), y.clone())) {
                        next.insert((u.clone(), z.clone(), w.clone()));
                    }
                }
            }
        }
        if next.len() == cur.len() {
            return cur;
        }
        cur = next;
    }
}

/// Floyd–Warshall transitive closure of the `trace` edges (paths of
/// length >= 1).
pub fn transitive_closure_oracle(g: &SoftwareGraph, trace: &str) -> BTreeSet<(String, String)> {
    let ids: Vec<String> = g.vertex_ids().map(|v| v.to_string()).collect();
    let n = ids.len();
    let pos: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut m = vec![vec![false; n]; n];
    for e in g.edges() {
        if e.trace.as_str() == trace {
            m[pos[e.source.as_str()]][pos[e.target.as_str()]] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                let via = m[k].clone();
                for (reach, step) in m[i].iter_mut().zip(via) {
                    *reach |= step;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if m[i][j] {
                out.insert((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    out
}

/// Repeated single-edge expansion until the set stops growing.
pub fn reach_oracle(g: &SoftwareGraph, sources: &BTreeSet<String>, filter: Option<&TypeSet>) -> BTreeSet<String> {
    let mut reached = sources.clone();
    loop {
        let mut grew = false;
        for e in g.edges() {
            if filter.is_none_or(|f| f.contains(&e.trace))
                && reached.contains(e.source.as_str())
                && reached.insert(e.target.to_string())
            {
                grew = true;
            }
        }
        if !grew {
            return reached;
        }
    }
}

/// Coverage by definition: (value, uncovered, vacuous).
pub fn coverage_oracle(
    g: &SoftwareGraph,
    source: &str,
    target: Option<&str>,
    filter: Option<&TypeSet>,
) -> (f64, Vec<String>, bool) {
    let sources: BTreeSet<String> = g
        .vertices()
        .filter(|(_, ls)| ls.contains(source))
        .map(|(v, _)| v.to_string())
        .collect();
    let reached = reach_oracle(g, &sources, filter);
    let targets: Vec<String> = g
        .vertices()
        .filter(|(_, ls)| match target {
            Some(t) => ls.contains(t),
            None => !ls.contains(source),
        })
        .map(|(v, _)| v.to_string())
        .collect();
    let uncovered: Vec<String> = targets.iter().filter(|v| !reached.contains(*v)).cloned().collect();
    if targets.is_empty() {
        (1.0, uncovered, true)
    } else {
        (
            (targets.len() - uncovered.len()) as f64 / targets.len() as f64,
            uncovered,
            false,
        )
    }
}

/// Per-vertex evaluation straight from the query's meaning.
pub fn query_holds(g: &SoftwareGraph, q: &Query, v: &str) -> bool {
    match q {
        Query::TypeIs(t) => g.labels_of(v).is_some_and(|ls| ls.contains(t)),
        Query::IdGlob(p) => p.matches(v),
        Query::And(a, b) => query_holds(g, a, v) && query_holds(g, b, v),
        Query::Or(a, b) => query_holds(g, a, v) || query_holds(g, b, v),
        Query::Not(a) => !query_holds(g, a, v),
        Query::Step {
            direction,
            traces,
            inner,
        } => g.edges().any(|e| {
            let trace_ok = traces.as_ref().is_none_or(|ts| ts.contains(&e.trace));
            let via_out = direction.includes_out()
                && e.source.as_str() == v
                && query_holds(g, inner, e.target.as_str());
            let via_in = direction.includes_in()
                && e.target.as_str() == v
                && query_holds(g, inner, e.source.as_str());
            trace_ok && (via_out || via_in)
        }),
    }
}

pub fn query_oracle(g: &SoftwareGraph, q: &Query) -> BTreeSet<String> {
    g.vertex_ids()
        .filter(|v| query_holds(g, q, v.as_str()))
        .map(|v| v.to_string())
        .collect()
}

/// The class-diagram pipeline computed with the naive closure oracle.
pub fn class_diagram_oracle(g: &SoftwareGraph) -> (BTreeSet<String>, BTreeSet<EdgeTriple>) {
    let relabeled: BTreeSet<EdgeTriple> = edge_triples(g)
        .into_iter()
        .map(|(s, tr, d)| {
            let tr = if tr == "contain" || tr == "return" { "depend".to_string() } else { tr };
            (s, tr, d)
        })
        .collect();
    let mut rules = Compositions::new();
    rules.insert((t("depend"), t("depend")), t("depend"));
    let closed = closure_oracle(&relabeled, &rules);
    let classes: BTreeSet<String> = g
        .vertices()
        .filter(|(_, ls)| ls.contains("class"))
        .map(|(v, _)| v.to_string())
        .collect();
    let edges = closed
        .into_iter()
        .filter(|(s, tr, d)| tr == "depend" && classes.contains(s) && classes.contains(d))
        .collect();
    (classes, edges)
}

pub fn sample() -> SoftwareGraph {
    swgraph::parse_graph_text(swgraph::SAMPLE_SG).unwrap()
}

pub fn types(names: &[&str]) -> TypeSet {
    type_set(names).unwrap()
}
