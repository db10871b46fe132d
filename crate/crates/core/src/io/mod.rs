//! Persistence: the line-oriented `.sg` interchange format and DOT export.

mod dot;
mod text;

pub use dot::{export_dot, DotOptions};
pub use text::{
    parse_graph_text, serialize_graph, EdgeDecl, GraphDocument, LoadError, LoadErrorKind,
    VertexDecl,
};
