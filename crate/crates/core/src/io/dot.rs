use std::fmt::Write;

use crate::dict::TypeName;
use crate::graph::SoftwareGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotOptions {
    pub label_edges: bool,
    /// Vertices carrying this artifact type are grouped in one cluster.
    pub cluster_by: Option<TypeName>,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions {
            label_edges: true,
            cluster_by: None,
        }
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

/// Renders `g` as a Graphviz digraph. Node labels read `id\n{types}`.
pub fn export_dot(g: &SoftwareGraph, options: &DotOptions) -> String {
    let mut out = String::from("digraph software {\n    node [shape=box];\n");
    let node = |out: &mut String, indent: &str, id: &str, types: Vec<&str>| {
        let label = format!("{}\\n{{{}}}", escape(id), types.join(", "));
        writeln!(out, "{indent}{} [label=\"{label}\"];", quote(id)).unwrap();
    };

    let in_cluster = |types: &crate::dict::TypeSet| {
        options
            .cluster_by
            .as_ref()
            .is_some_and(|c| types.contains(c))
    };
    if let Some(c) = &options.cluster_by {
        let members: Vec<_> = g.vertices().filter(|(_, ls)| in_cluster(ls)).collect();
        if !members.is_empty() {
            writeln!(out, "    subgraph {} {{", quote(&format!("cluster_{c}"))).unwrap();
            writeln!(out, "        label={};", quote(c.as_str())).unwrap();
            for (v, ls) in members {
                node(&mut out, "        ", v.as_str(), ls.iter().map(TypeName::as_str).collect());
            }
            out.push_str("    }\n");
        }
    }
    for (v, ls) in g.vertices().filter(|(_, ls)| !in_cluster(ls)) {
        node(&mut out, "    ", v.as_str(), ls.iter().map(TypeName::as_str).collect());
    }
    for e in g.edges() {
        write!(out, "    {} -> {}", quote(e.source.as_str()), quote(e.target.as_str())).unwrap();
        if options.label_edges {
            write!(out, " [label={}]", quote(e.trace.as_str())).unwrap();
        }
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}
