use std::collections::HashMap;

use crate::graph::{SoftwareGraph, VertexId};

/// Dense `usize` numbering of a graph's vertices for the hot loops. Index
/// order is id order.
pub(crate) struct VertexIndex {
    pub ids: Vec<VertexId>,
    lookup: HashMap<VertexId, usize>,
}

impl VertexIndex {
    pub fn new(g: &SoftwareGraph) -> Self {
        let mut ids: Vec<VertexId> = g.vertex_ids().cloned().collect();
        // Dangling endpoints only exist in unvalidated graphs; number them too.
        let dangling = g
            .edges()
            .flat_map(|e| [e.source, e.target])
            .filter(|v| !g.contains_vertex(v.as_str()))
            .collect::<Vec<_>>();
        if !dangling.is_empty() {
            ids.extend(dangling);
            ids.sort();
            ids.dedup();
        }
        let lookup = ids.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        VertexIndex { ids, lookup }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn get(&self, v: &str) -> usize {
        self.lookup[v]
    }
}
