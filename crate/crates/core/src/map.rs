//! Abstraction maps: edge relabeling and composition of consecutive edges
//! up to a fixpoint.
//!
//! A composition rule `(x, y) -> z` reads in path order: an `x` edge `u -> v`
//! followed by a `y` edge `v -> w` yields a `z` edge `u -> w`. Closure keeps
//! the original edges; trimming the result down is left to a view.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::dict::{TypeDictionary, TypeName};
use crate::error::Result;
use crate::graph::{Edge, SoftwareGraph};
use crate::index::VertexIndex;
use crate::view::{view, ViewSpec};

pub type Relabels = BTreeMap<TypeName, TypeName>;
pub type Compositions = BTreeMap<(TypeName, TypeName), TypeName>;

/// Relabeling applied first, then composition to a fixpoint.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MapSpec {
    pub relabels: Relabels,
    pub compositions: Compositions,
}

impl MapSpec {
    /// `contain` and `return` become `depend`, and `depend` composes with
    /// itself.
    pub fn class_diagram() -> Self {
        let depend = TypeName::new("depend").expect("identifier");
        let mut spec = MapSpec::default();
        for from in ["contain", "return"] {
            spec.relabels
                .insert(TypeName::new(from).expect("identifier"), depend.clone());
        }
        spec.compositions
            .insert((depend.clone(), depend.clone()), depend);
        spec
    }
}

/// Renames edge types. Edges that collide after renaming are merged.
pub fn relabel(g: &SoftwareGraph, relabels: &Relabels) -> Result<SoftwareGraph> {
    let mut dict = g.dictionary().clone();
    dict.check_trace_types(relabels.keys())?;
    for to in relabels.values() {
        dict.add_trace_type(to.clone());
    }
    let edges = g
        .edges()
        .map(|e| match relabels.get(&e.trace) {
            Some(to) => Edge::new(e.source, to.clone(), e.target),
            None => e,
        })
        .collect();
    Ok(SoftwareGraph::from_parts(dict, g.labels().clone(), edges))
}

/// Smallest edge superset of `g` closed under `compositions`.
pub fn compose_closure(g: &SoftwareGraph, compositions: &Compositions) -> Result<SoftwareGraph> {
    let mut dict = g.dictionary().clone();
    for ((x, y), z) in compositions {
        dict.check_trace_types([x, y])?;
        dict.add_trace_type(z.clone());
    }
    if compositions.is_empty() {
        let (_, labels, edges) = g.clone().into_parts();
        return Ok(SoftwareGraph::from_parts(dict, labels, edges));
    }

    let vertices = VertexIndex::new(g);
    let traces: Vec<TypeName> = dict.trace_types().iter().cloned().collect();
    let trace_ix: HashMap<&str, u32> = traces
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i as u32))
        .collect();
    let rules: HashMap<(u32, u32), u32> = compositions
        .iter()
        .map(|((x, y), z)| {
            (
                (trace_ix[x.as_str()], trace_ix[y.as_str()]),
                trace_ix[z.as_str()],
            )
        })
        .collect();

    let n = vertices.len();
    let mut out: Vec<Vec<(u32, usize)>> = vec![Vec::new(); n];
    let mut inc: Vec<Vec<(u32, usize)>> = vec![Vec::new(); n];
    let mut seen: HashSet<(usize, u32, usize)> = HashSet::with_capacity(g.edge_count() * 2);
    let mut work = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let edge = (
            vertices.get(e.source.as_str()),
            trace_ix[e.trace.as_str()],
            vertices.get(e.target.as_str()),
        );
        seen.insert(edge);
        out[edge.0].push((edge.1, edge.2));
        inc[edge.2].push((edge.1, edge.0));
        work.push(edge);
    }
    let original = seen.len();

    let mut fresh = Vec::new();
    while let Some((u, x, v)) = work.pop() {
        for &(y, w) in &out[v] {
            if let Some(&z) = rules.get(&(x, y)) {
                fresh.push((u, z, w));
            }
        }
        for &(w, t) in &inc[u] {
            if let Some(&z) = rules.get(&(w, x)) {
                fresh.push((t, z, v));
            }
        }
        for e in fresh.drain(..) {
            if seen.insert(e) {
                out[e.0].push((e.1, e.2));
                inc[e.2].push((e.1, e.0));
                work.push(e);
            }
        }
    }
    assert!(
        seen.len() <= n * n * traces.len(),
        "closure exceeded |V|^2 * |T| edges"
    );

    if seen.len() == original {
        return Ok(SoftwareGraph::from_parts(dict, g.labels().clone(), g.edges().collect()));
    }
    // Index order agrees with id and trace-name order, so sorting the
    // triples sorts the edges.
    let mut closed: Vec<_> = seen.into_iter().collect();
    closed.sort_unstable();
    let edges = closed
        .into_iter()
        .map(|(u, x, v)| {
            Edge::new(
                vertices.ids[u].clone(),
                traces[x as usize].clone(),
                vertices.ids[v].clone(),
            )
        })
        .collect();
    Ok(SoftwareGraph::from_parts(dict, g.labels().clone(), edges))
}

/// Relabels, then composes to a fixpoint.
pub fn apply(g: &SoftwareGraph, spec: &MapSpec) -> Result<SoftwareGraph> {
    let relabeled = relabel(g, &spec.relabels)?;
    compose_closure(&relabeled, &spec.compositions)
}

fn class_diagram_preconditions(dict: &TypeDictionary) -> Result<()> {
    dict.artifact_type("class")?;
    dict.trace_type("contain")?;
    dict.trace_type("return")?;
    Ok(())
}

/// The classical class diagram: class vertices joined by `depend` edges
/// wherever a non-empty path of `contain`, `return` or `depend` edges leads
/// from one class to another (possibly through non-class vertices).
///
/// Equivalent to [`class_diagram_by_closure`] but never materializes the
/// closure over non-class vertices: strongly connected components are
/// condensed and each component accumulates the set of classes it reaches.
pub fn class_diagram(g: &SoftwareGraph) -> Result<SoftwareGraph> {
    class_diagram_preconditions(g.dictionary())?;
    let vertices = VertexIndex::new(g);
    let n = vertices.len();

    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in g.edges() {
        if matches!(e.trace.as_str(), "contain" | "return" | "depend") {
            succ[vertices.get(e.source.as_str())].push(vertices.get(e.target.as_str()));
        }
    }
    let class_of: Vec<Option<usize>> = {
        let mut k = 0;
        vertices
            .ids
            .iter()
            .map(|v| {
                g.has_label(v.as_str(), "class").then(|| {
                    k += 1;
                    k - 1
                })
            })
            .collect()
    };
    let classes: Vec<usize> = (0..n).filter(|&v| class_of[v].is_some()).collect();

    let (comp, members) = strongly_connected(&succ);
    let words = classes.len().div_ceil(64);
    let mut reach = vec![0u64; members.len() * words];
    let mut own = vec![0u64; words];
    // Components come out sinks first, so successors are always done.
    for (c, vs) in members.iter().enumerate() {
        own.iter_mut().for_each(|w| *w = 0);
        let mut cyclic = false;
        for &v in vs {
            if let Some(k) = class_of[v] {
                own[k / 64] |= 1 << (k % 64);
            }
        }
        let (done, rest) = reach.split_at_mut(c * words);
        let acc = &mut rest[..words];
        for &v in vs {
            for &w in &succ[v] {
                let d = comp[w];
                if d == c {
                    cyclic = true;
                    continue;
                }
                for (a, b) in acc.iter_mut().zip(&done[d * words..(d + 1) * words]) {
                    *a |= b;
                }
                if let Some(k) = class_of[w] {
                    acc[k / 64] |= 1 << (k % 64);
                }
            }
        }
        if cyclic {
            for (a, b) in acc.iter_mut().zip(&own) {
                *a |= b;
            }
        }
    }

    let class_ty = TypeName::new("class").expect("identifier");
    let depend = TypeName::new("depend").expect("identifier");
    let dict = TypeDictionary::from_sets(
        [class_ty.clone()].into_iter().collect(),
        [depend.clone()].into_iter().collect(),
    );
    let labels = classes
        .iter()
        .map(|&v| (vertices.ids[v].clone(), [class_ty.clone()].into_iter().collect()))
        .collect();

    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); classes.len()];
    let mut out_lists = Vec::with_capacity(classes.len());
    for (k, &v) in classes.iter().enumerate() {
        let bits = &reach[comp[v] * words..(comp[v] + 1) * words];
        let mut list = Vec::new();
        for (wi, &word) in bits.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let target = wi * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                preds[target].push(k);
                list.push((depend.clone(), vertices.ids[classes[target]].clone()));
            }
        }
        out_lists.push((vertices.ids[v].clone(), list));
    }
    let in_lists = preds
        .into_iter()
        .enumerate()
        .map(|(target, ps)| {
            let list = ps
                .into_iter()
                .map(|k| (depend.clone(), vertices.ids[classes[k]].clone()))
                .collect();
            (vertices.ids[classes[target]].clone(), list)
        })
        .collect();
    Ok(SoftwareGraph::from_sorted_adjacency(dict, labels, out_lists, in_lists))
}

/// Tarjan's algorithm without recursion. Returns the component of every
/// vertex and the members of every component; components are numbered in
/// reverse topological order (an edge never leads to a higher number).
fn strongly_connected(succ: &[Vec<usize>]) -> (Vec<usize>, Vec<Vec<usize>>) {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut order = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut stack = Vec::new();
    let mut calls: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if order[root] != UNSEEN {
            continue;
        }
        order[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        calls.push((root, 0));
        while let Some(&mut (v, ref mut next)) = calls.last_mut() {
            if let Some(&w) = succ[v].get(*next) {
                *next += 1;
                if order[w] == UNSEEN {
                    order[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(order[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == order[v] {
                let id = members.len();
                let mut group = Vec::new();
                loop {
                    let w = stack.pop().expect("v is on the stack");
                    on_stack[w] = false;
                    comp[w] = id;
                    group.push(w);
                    if w == v {
                        break;
                    }
                }
                members.push(group);
            }
        }
    }
    (comp, members)
}

/// The class diagram computed literally: relabel, close, then view.
pub fn class_diagram_by_closure(g: &SoftwareGraph) -> Result<SoftwareGraph> {
    class_diagram_preconditions(g.dictionary())?;
    let mapped = apply(g, &MapSpec::class_diagram())?;
    view(&mapped, &ViewSpec::new(["class"], ["depend"])?)
}
