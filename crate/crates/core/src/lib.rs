//! Typed directed multigraphs for software and software-process
//! architecture.
//!
//! Artifacts (classes, requirements, unit tests, ...) are vertices labeled
//! with one or more artifact types; traces between them (contain, call,
//! verify, ...) are typed directed edges. On top of the [`SoftwareGraph`]
//! this crate offers typed [views](view), abstraction [maps](map),
//! [metrics], a small [query] language and text/DOT [persistence](io).

pub mod dict;
mod error;
pub mod graph;
mod index;
pub mod io;
pub mod map;
pub mod metrics;
pub mod query;
pub mod view;

pub use dict::{TypeDictionary, TypeName, TypeSet};
pub use error::{GraphError, Result};
pub use graph::{Direction, Edge, SoftwareGraph, VertexId, Violation};
pub use io::{export_dot, parse_graph_text, serialize_graph, DotOptions, GraphDocument, LoadError};
pub use map::{class_diagram, compose_closure, relabel, MapSpec};
pub use metrics::{coverage, evaluate_metric, reachable_from, MetricArgs, MetricResult, Target};
pub use query::{eval_query, parse_query, Query};
pub use view::{view, view_stats, ViewSpec};

/// The bundled desk-scale sample graph in `.sg` form.
pub const SAMPLE_SG: &str = include_str!("../fixtures/sample.sg");
