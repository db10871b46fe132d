//! Typed views: the subgraph induced by a chosen set of artifact types and
//! trace types.

use std::collections::BTreeMap;

use crate::dict::{type_set, TypeDictionary, TypeSet};
use crate::error::Result;
use crate::graph::SoftwareGraph;

/// The artifact and trace types a view keeps. Empty sets are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ViewSpec {
    pub artifact_types: TypeSet,
    pub trace_types: TypeSet,
}

impl ViewSpec {
    pub fn new<A, T, S1, S2>(artifact_types: A, trace_types: T) -> Result<Self>
    where
        A: IntoIterator<Item = S1>,
        T: IntoIterator<Item = S2>,
        S1: AsRef<str>,
        S2: AsRef<str>,
    {
        Ok(ViewSpec {
            artifact_types: type_set(artifact_types)?,
            trace_types: type_set(trace_types)?,
        })
    }

    /// The spec keeping every type of `dict`.
    pub fn full(dict: &TypeDictionary) -> Self {
        ViewSpec {
            artifact_types: dict.artifact_types().clone(),
            trace_types: dict.trace_types().clone(),
        }
    }

    /// The class view: classes, interfaces, methods and fields joined by
    /// containment, implementation and return edges.
    pub fn class_view() -> Self {
        ViewSpec::new(
            ["class", "interface", "method", "field"],
            ["contain", "implement", "return"],
        )
        .expect("valid identifiers")
    }

    pub fn intersection(&self, other: &ViewSpec) -> ViewSpec {
        ViewSpec {
            artifact_types: &self.artifact_types & &other.artifact_types,
            trace_types: &self.trace_types & &other.trace_types,
        }
    }

    pub fn is_subset(&self, other: &ViewSpec) -> bool {
        self.artifact_types.is_subset(&other.artifact_types)
            && self.trace_types.is_subset(&other.trace_types)
    }

    fn check(&self, dict: &TypeDictionary) -> Result<()> {
        dict.check_artifact_types(&self.artifact_types)?;
        dict.check_trace_types(&self.trace_types)
    }
}

/// Restricts `g` to the vertices carrying at least one of the spec's artifact
/// types. Surviving vertices keep only their labels inside the spec, and only
/// edges of a kept trace type between surviving vertices remain. The result's
/// dictionary is narrowed to the spec.
pub fn view(g: &SoftwareGraph, spec: &ViewSpec) -> Result<SoftwareGraph> {
    spec.check(g.dictionary())?;
    let labels: BTreeMap<_, TypeSet> = g
        .vertices()
        .filter_map(|(v, ls)| {
            let kept: TypeSet = ls.intersection(&spec.artifact_types).cloned().collect();
            (!kept.is_empty()).then(|| (v.clone(), kept))
        })
        .collect();
    let edges = g
        .edges()
        .filter(|e| {
            spec.trace_types.contains(&e.trace)
                && labels.contains_key(&e.source)
                && labels.contains_key(&e.target)
        })
        .collect();
    let dict = TypeDictionary::from_sets(spec.artifact_types.clone(), spec.trace_types.clone());
    Ok(SoftwareGraph::from_parts(dict, labels, edges))
}

/// Vertex and edge counts of `view(g, spec)`, computed without building it.
pub fn view_stats(g: &SoftwareGraph, spec: &ViewSpec) -> Result<(usize, usize)> {
    spec.check(g.dictionary())?;
    let keep = |v: &str| {
        g.labels_of(v)
            .is_some_and(|ls| !ls.is_disjoint(&spec.artifact_types))
    };
    let vertices = g.vertex_ids().filter(|v| keep(v.as_str())).count();
    let edges = g
        .edges()
        .filter(|e| {
            spec.trace_types.contains(&e.trace) && keep(e.source.as_str()) && keep(e.target.as_str())
        })
        .count();
    Ok((vertices, edges))
}
