//! The `.sg` format.
//!
//! ```text
//! no-defaults              # optional: start from an empty dictionary
//! artifact-type IDENT      # extend the artifact types
//! trace-type IDENT         # extend the trace types
//! vertex ID TYPE [TYPE ...]
//! edge SRC TRACE DST
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Declarations may
//! appear in any order; edges may name vertices declared further down.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::{self, Write};
use std::path::PathBuf;

use thiserror::Error;

use crate::dict::{TypeDictionary, TypeName, TypeSet};
use crate::graph::{Edge, SoftwareGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadErrorKind {
    Syntax(String),
    UnknownArtifactType(String),
    UnknownTraceType(String),
    UnknownEndpoint(String),
    DuplicateVertex(String),
    UnlabeledVertex(String),
}

impl LoadErrorKind {
    pub fn is_syntax(&self) -> bool {
        matches!(self, LoadErrorKind::Syntax(_))
    }
}

impl fmt::Display for LoadErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            LoadErrorKind::UnknownArtifactType(t) => write!(f, "unknown artifact type {t}"),
            LoadErrorKind::UnknownTraceType(t) => write!(f, "unknown trace type {t}"),
            LoadErrorKind::UnknownEndpoint(v) => write!(f, "unknown endpoint {v}"),
            LoadErrorKind::DuplicateVertex(v) => write!(f, "duplicate vertex {v}"),
            LoadErrorKind::UnlabeledVertex(v) => write!(f, "unlabeled vertex {v}"),
        }
    }
}

/// A load failure at a 1-based line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at line {line}")]
pub struct LoadError {
    pub line: usize,
    pub kind: LoadErrorKind,
}

impl LoadError {
    fn syntax(line: usize, msg: impl Into<String>) -> Self {
        LoadError {
            line,
            kind: LoadErrorKind::Syntax(msg.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexDecl {
    pub line: usize,
    pub id: VertexId,
    pub types: Vec<TypeName>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDecl {
    pub line: usize,
    pub source: VertexId,
    pub trace: TypeName,
    pub target: VertexId,
}

/// A syntactically valid `.sg` document whose declarations have not yet been
/// checked against each other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDocument {
    pub source: Option<PathBuf>,
    pub use_defaults: bool,
    pub artifact_types: Vec<(usize, TypeName)>,
    pub trace_types: Vec<(usize, TypeName)>,
    pub vertices: Vec<VertexDecl>,
    pub edges: Vec<EdgeDecl>,
}

fn type_name(line: usize, s: &str) -> Result<TypeName, LoadError> {
    TypeName::new(s).map_err(|_| LoadError::syntax(line, format!("invalid type name `{s}`")))
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<Self, LoadError> {
        let mut doc = GraphDocument {
            source: None,
            use_defaults: true,
            artifact_types: Vec::new(),
            trace_types: Vec::new(),
            vertices: Vec::new(),
            edges: Vec::new(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut words = content.split_whitespace();
            let Some(keyword) = words.next() else {
                continue;
            };
            let args: Vec<&str> = words.collect();
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(LoadError::syntax(
                        line,
                        format!("`{keyword}` takes {n} argument(s), got {}", args.len()),
                    ))
                }
            };
            match keyword {
                "no-defaults" => {
                    arity(0)?;
                    if !doc.use_defaults {
                        return Err(LoadError::syntax(line, "repeated `no-defaults`"));
                    }
                    doc.use_defaults = false;
                }
                "artifact-type" => {
                    arity(1)?;
                    doc.artifact_types.push((line, type_name(line, args[0])?));
                }
                "trace-type" => {
                    arity(1)?;
                    doc.trace_types.push((line, type_name(line, args[0])?));
                }
                "vertex" => {
                    let Some((id, types)) = args.split_first() else {
                        return Err(LoadError::syntax(line, "`vertex` needs an id"));
                    };
                    doc.vertices.push(VertexDecl {
                        line,
                        id: VertexId::new(*id).expect("whitespace-free token"),
                        types: types
                            .iter()
                            .map(|t| type_name(line, t))
                            .collect::<Result<_, _>>()?,
                    });
                }
                "edge" => {
                    arity(3)?;
                    doc.edges.push(EdgeDecl {
                        line,
                        source: VertexId::new(args[0]).expect("whitespace-free token"),
                        trace: type_name(line, args[1])?,
                        target: VertexId::new(args[2]).expect("whitespace-free token"),
                    });
                }
                other => {
                    return Err(LoadError::syntax(line, format!("unknown directive `{other}`")));
                }
            }
        }
        Ok(doc)
    }

    pub fn with_source(mut self, path: impl Into<PathBuf>) -> Self {
        self.source = Some(path.into());
        self
    }

    /// The defaults (unless disabled) plus every header declaration.
    pub fn dictionary(&self) -> TypeDictionary {
        let mut dict = if self.use_defaults {
            TypeDictionary::default()
        } else {
            TypeDictionary::empty()
        };
        for (_, t) in &self.artifact_types {
            dict.add_artifact_type(t.clone());
        }
        for (_, t) in &self.trace_types {
            dict.add_trace_type(t.clone());
        }
        dict
    }

    /// Every semantic problem, in line order.
    pub fn violations(&self) -> Vec<LoadError> {
        let dict = self.dictionary();
        let mut out = Vec::new();
        let mut declared: HashSet<&VertexId> = HashSet::new();
        for v in &self.vertices {
            let err = |kind| LoadError { line: v.line, kind };
            if !declared.insert(&v.id) {
                out.push(err(LoadErrorKind::DuplicateVertex(v.id.to_string())));
            }
            if v.types.is_empty() {
                out.push(err(LoadErrorKind::UnlabeledVertex(v.id.to_string())));
            }
            for t in &v.types {
                if !dict.has_artifact_type(t.as_str()) {
                    out.push(err(LoadErrorKind::UnknownArtifactType(t.to_string())));
                }
            }
        }
        for e in &self.edges {
            let err = |kind| LoadError { line: e.line, kind };
            if !dict.has_trace_type(e.trace.as_str()) {
                out.push(err(LoadErrorKind::UnknownTraceType(e.trace.to_string())));
            }
            if !declared.contains(&e.source) {
                out.push(err(LoadErrorKind::UnknownEndpoint(e.source.to_string())));
            }
            if e.target != e.source && !declared.contains(&e.target) {
                out.push(err(LoadErrorKind::UnknownEndpoint(e.target.to_string())));
            }
        }
        out.sort_by_key(|e| e.line);
        out
    }

    /// Builds the graph, failing on the earliest violation.
    pub fn into_graph(self) -> Result<SoftwareGraph, LoadError> {
        if let Some(first) = self.violations().into_iter().next() {
            return Err(first);
        }
        let dict = self.dictionary();
        let labels: BTreeMap<VertexId, TypeSet> = self
            .vertices
            .into_iter()
            .map(|v| (v.id, v.types.into_iter().collect()))
            .collect();
        let edges: BTreeSet<Edge> = self
            .edges
            .into_iter()
            .map(|e| Edge::new(e.source, e.trace, e.target))
            .collect();
        Ok(SoftwareGraph::from_parts(dict, labels, edges))
    }
}

/// Parses and validates a `.sg` document.
pub fn parse_graph_text(text: &str) -> Result<SoftwareGraph, LoadError> {
    GraphDocument::parse(text)?.into_graph()
}

/// Canonical text: header, then vertices by id, then edges by
/// (source, trace, target). Equal graphs serialize to identical bytes.
///
/// A dictionary that contains the defaults is written as its extra types
/// only; otherwise `no-defaults` is emitted followed by every type.
pub fn serialize_graph(g: &SoftwareGraph) -> String {
    let dict = g.dictionary();
    let defaults = TypeDictionary::default();
    let mut out = String::new();
    let (artifacts, traces): (Vec<&TypeName>, Vec<&TypeName>) = if dict.contains_all(&defaults) {
        (
            dict.artifact_types()
                .difference(defaults.artifact_types())
                .collect(),
            dict.trace_types()
                .difference(defaults.trace_types())
                .collect(),
        )
    } else {
        out.push_str("no-defaults\n");
        (
            dict.artifact_types().iter().collect(),
            dict.trace_types().iter().collect(),
        )
    };
    for t in artifacts {
        writeln!(out, "artifact-type {t}").unwrap();
    }
    for t in traces {
        writeln!(out, "trace-type {t}").unwrap();
    }
    for (v, labels) in g.vertices() {
        write!(out, "vertex {v}").unwrap();
        for t in labels {
            write!(out, " {t}").unwrap();
        }
        out.push('\n');
    }
    for e in g.edges() {
        writeln!(out, "edge {e}").unwrap();
    }
    out
}
