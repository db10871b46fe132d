//! The software graph: vertices annotated with artifact types and connected
//! by typed directed edges.
//!
//! The edge set has set semantics, so two vertices are joined by at most one
//! edge per trace type. Parallel edges arise only from distinct trace types.
//! A vertex may carry several artifact types at once.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::dict::{TypeDictionary, TypeName, TypeSet};
use crate::error::{GraphError, Result};

/// Caller-supplied vertex identity. Any non-empty string without whitespace,
/// control characters or `#`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(Arc<str>);

impl VertexId {
    pub fn new(s: impl AsRef<str>) -> Result<Self> {
        let s = s.as_ref();
        if Self::is_valid(s) {
            Ok(VertexId(s.into()))
        } else {
            Err(GraphError::InvalidVertexId(s.to_string()))
        }
    }

    pub fn is_valid(s: &str) -> bool {
        !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c.is_control() || c == '#')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for VertexId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for VertexId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A directed, typed edge. Ordered by (source, trace, target).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: VertexId,
    pub trace: TypeName,
    pub target: VertexId,
}

impl Edge {
    pub fn new(source: VertexId, trace: TypeName, target: VertexId) -> Self {
        Edge {
            source,
            trace,
            target,
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.source, self.trace, self.target)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Out,
    In,
    Both,
}

impl Direction {
    pub fn includes_out(self) -> bool {
        matches!(self, Direction::Out | Direction::Both)
    }

    pub fn includes_in(self) -> bool {
        matches!(self, Direction::In | Direction::Both)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Out => "out",
            Direction::In => "in",
            Direction::Both => "both",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "out" => Ok(Direction::Out),
            "in" => Ok(Direction::In),
            "both" => Ok(Direction::Both),
            other => Err(format!("invalid direction `{other}` (expected out, in or both)")),
        }
    }
}

/// A broken graph invariant found by [`SoftwareGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownEndpoint { edge: Edge, endpoint: VertexId },
    UnlabeledVertex(VertexId),
    UnknownArtifactType { vertex: VertexId, ty: TypeName },
    UnknownTraceType { edge: Edge },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownEndpoint { edge, endpoint } => {
                write!(f, "unknown endpoint {endpoint} in edge `{edge}`")
            }
            Violation::UnlabeledVertex(v) => write!(f, "unlabeled vertex {v}"),
            Violation::UnknownArtifactType { vertex, ty } => {
                write!(f, "unknown artifact type {ty} on vertex {vertex}")
            }
            Violation::UnknownTraceType { edge } => {
                write!(f, "unknown trace type {} in edge `{edge}`", edge.trace)
            }
        }
    }
}

/// Per-vertex `(trace, other endpoint)` lists, each sorted and deduplicated.
type Adjacency = BTreeMap<VertexId, Vec<(TypeName, VertexId)>>;

fn sorted_insert(list: &mut Vec<(TypeName, VertexId)>, item: (TypeName, VertexId)) -> bool {
    match list.binary_search(&item) {
        Ok(_) => false,
        Err(pos) => {
            list.insert(pos, item);
            true
        }
    }
}

/// A software graph over a [`TypeDictionary`].
///
/// Built by a single writer through [`add_vertex`](Self::add_vertex) and
/// [`add_edge`](Self::add_edge); analysis code only ever reads it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoftwareGraph {
    dict: TypeDictionary,
    labels: BTreeMap<VertexId, TypeSet>,
    // The edge set, keyed by source; `in_adj` is its mirror keyed by target.
    out_adj: Adjacency,
    in_adj: Adjacency,
    edge_count: usize,
}

impl SoftwareGraph {
    pub fn new(dict: TypeDictionary) -> Self {
        SoftwareGraph {
            dict,
            labels: BTreeMap::new(),
            out_adj: Adjacency::new(),
            in_adj: Adjacency::new(),
            edge_count: 0,
        }
    }

    /// Assembles a graph without checking any invariant. Use
    /// [`validate`](Self::validate) to inspect the result.
    pub fn from_parts(
        dict: TypeDictionary,
        labels: BTreeMap<VertexId, TypeSet>,
        edges: BTreeSet<Edge>,
    ) -> Self {
        let edge_count = edges.len();
        let mut reversed = Vec::with_capacity(edge_count);
        let mut out_lists: Vec<(VertexId, Vec<(TypeName, VertexId)>)> = Vec::new();
        for Edge { source, trace, target } in edges {
            reversed.push((target.clone(), trace.clone(), source.clone()));
            match out_lists.last_mut() {
                Some((s, list)) if *s == source => list.push((trace, target)),
                _ => out_lists.push((source, vec![(trace, target)])),
            }
        }
        reversed.sort_unstable();
        let mut in_lists: Vec<(VertexId, Vec<(TypeName, VertexId)>)> = Vec::new();
        for (target, trace, source) in reversed {
            match in_lists.last_mut() {
                Some((t, list)) if *t == target => list.push((trace, source)),
                _ => in_lists.push((target, vec![(trace, source)])),
            }
        }
        Self::from_sorted_adjacency(dict, labels, out_lists, in_lists)
    }

    /// Bulk constructor. Each list must be sorted and free of duplicates, and
    /// `in_lists` must mirror `out_lists`.
    pub(crate) fn from_sorted_adjacency(
        dict: TypeDictionary,
        labels: BTreeMap<VertexId, TypeSet>,
        out_lists: Vec<(VertexId, Vec<(TypeName, VertexId)>)>,
        in_lists: Vec<(VertexId, Vec<(TypeName, VertexId)>)>,
    ) -> Self {
        let build = |lists: Vec<(VertexId, Vec<(TypeName, VertexId)>)>| -> Adjacency {
            lists.into_iter().filter(|(_, l)| !l.is_empty()).collect()
        };
        let out_adj = build(out_lists);
        let in_adj = build(in_lists);
        let edge_count = out_adj.values().map(Vec::len).sum();
        debug_assert_eq!(edge_count, in_adj.values().map(Vec::len).sum::<usize>());
        debug_assert!(out_adj.values().all(|l| l.windows(2).all(|w| w[0] < w[1])));
        SoftwareGraph {
            dict,
            labels,
            out_adj,
            in_adj,
            edge_count,
        }
    }

    pub fn into_parts(self) -> (TypeDictionary, BTreeMap<VertexId, TypeSet>, BTreeSet<Edge>) {
        let edges = self.edges().collect();
        (self.dict, self.labels, edges)
    }

    pub fn dictionary(&self) -> &TypeDictionary {
        &self.dict
    }

    /// Extends the dictionary. Existing vertices and edges are unaffected.
    pub fn dictionary_mut(&mut self) -> &mut TypeDictionary {
        &mut self.dict
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty() && self.edge_count == 0
    }

    /// Vertices in id order, each with its artifact types.
    pub fn vertices(&self) -> impl Iterator<Item = (&VertexId, &TypeSet)> + '_ {
        self.labels.iter()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.labels.keys()
    }

    pub fn labels(&self) -> &BTreeMap<VertexId, TypeSet> {
        &self.labels
    }

    pub fn labels_of(&self, v: &str) -> Option<&TypeSet> {
        self.labels.get(v)
    }

    pub fn contains_vertex(&self, v: &str) -> bool {
        self.labels.contains_key(v)
    }

    /// Looks up the stored id for `v`.
    pub fn vertex(&self, v: &str) -> Result<&VertexId> {
        self.labels
            .get_key_value(v)
            .map(|(k, _)| k)
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))
    }

    pub fn has_label(&self, v: &str, ty: &str) -> bool {
        self.labels.get(v).is_some_and(|ls| ls.contains(ty))
    }

    /// Edges in (source, trace, target) order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.out_adj.iter().flat_map(|(s, out)| {
            out.iter()
                .map(move |(t, w)| Edge::new(s.clone(), t.clone(), w.clone()))
        })
    }

    pub fn contains_edge(&self, src: &str, trace: &str, dst: &str) -> bool {
        let (Ok(trace), Ok(dst)) = (TypeName::new(trace), VertexId::new(dst)) else {
            return false;
        };
        self.out_adj
            .get(src)
            .is_some_and(|out| out.binary_search(&(trace, dst)).is_ok())
    }

    /// Outgoing `(trace, target)` pairs of `v`.
    pub fn out_edges(&self, v: &str) -> impl Iterator<Item = (&TypeName, &VertexId)> + '_ {
        self.out_adj.get(v).into_iter().flatten().map(|(t, w)| (t, w))
    }

    /// Incoming `(trace, source)` pairs of `v`.
    pub fn in_edges(&self, v: &str) -> impl Iterator<Item = (&TypeName, &VertexId)> + '_ {
        self.in_adj.get(v).into_iter().flatten().map(|(t, w)| (t, w))
    }

    /// Incident edges of `v` as `(trace, other endpoint)` along `direction`.
    pub fn incident(
        &self,
        v: &str,
        direction: Direction,
    ) -> impl Iterator<Item = (&TypeName, &VertexId)> + '_ {
        let out = direction
            .includes_out()
            .then(|| self.out_edges(v))
            .into_iter()
            .flatten();
        let inc = direction
            .includes_in()
            .then(|| self.in_edges(v))
            .into_iter()
            .flatten();
        out.chain(inc)
    }

    /// Adds a vertex labeled with exactly `attrs`.
    pub fn add_vertex<I, S>(&mut self, id: &str, attrs: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let id = VertexId::new(id)?;
        if self.labels.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id.to_string()));
        }
        let mut labels = TypeSet::new();
        for a in attrs {
            labels.insert(self.dict.artifact_type(a.as_ref())?);
        }
        if labels.is_empty() {
            return Err(GraphError::EmptyLabels(id.to_string()));
        }
        self.labels.insert(id, labels);
        Ok(())
    }

    /// Adds the edge `(src, trace, dst)`. Returns false if it was already
    /// present, in which case the graph is unchanged.
    pub fn add_edge(&mut self, src: &str, trace: &str, dst: &str) -> Result<bool> {
        let src = self.vertex(src)?.clone();
        let dst = self.vertex(dst)?.clone();
        let trace = self.dict.trace_type(trace)?;
        Ok(self.insert_edge_unchecked(Edge::new(src, trace, dst)))
    }

    pub(crate) fn insert_edge_unchecked(&mut self, e: Edge) -> bool {
        let fresh = sorted_insert(
            self.out_adj.entry(e.source.clone()).or_default(),
            (e.trace.clone(), e.target.clone()),
        );
        if fresh {
            sorted_insert(self.in_adj.entry(e.target).or_default(), (e.trace, e.source));
            self.edge_count += 1;
        }
        fresh
    }

    /// Distinct vertices adjacent to `v` along edges in `direction` whose
    /// trace is in `trace_filter` and whose labels meet `attr_filter`.
    /// `None` filters accept everything.
    pub fn neighbors(
        &self,
        v: &str,
        direction: Direction,
        trace_filter: Option<&TypeSet>,
        attr_filter: Option<&TypeSet>,
    ) -> Result<BTreeSet<VertexId>> {
        self.vertex(v)?;
        if let Some(traces) = trace_filter {
            self.dict.check_trace_types(traces)?;
        }
        if let Some(attrs) = attr_filter {
            self.dict.check_artifact_types(attrs)?;
        }
        Ok(self
            .incident(v, direction)
            .filter(|(t, _)| trace_filter.is_none_or(|f| f.contains(*t)))
            .filter(|(_, w)| {
                attr_filter.is_none_or(|f| {
                    self.labels
                        .get(*w)
                        .is_some_and(|ls| !ls.is_disjoint(f))
                })
            })
            .map(|(_, w)| w.clone())
            .collect())
    }

    /// Lists every broken invariant; an empty list means the graph is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (v, ls) in &self.labels {
            if ls.is_empty() {
                out.push(Violation::UnlabeledVertex(v.clone()));
            }
            for ty in ls {
                if !self.dict.has_artifact_type(ty.as_str()) {
                    out.push(Violation::UnknownArtifactType {
                        vertex: v.clone(),
                        ty: ty.clone(),
                    });
                }
            }
        }
        for e in self.edges() {
            if !self.dict.has_trace_type(e.trace.as_str()) {
                out.push(Violation::UnknownTraceType { edge: e.clone() });
            }
            for endpoint in [&e.source, &e.target] {
                if !self.labels.contains_key(endpoint) {
                    out.push(Violation::UnknownEndpoint {
                        edge: e.clone(),
                        endpoint: endpoint.clone(),
                    });
                }
                if e.source == e.target {
                    break;
                }
            }
        }
        out
    }
}
