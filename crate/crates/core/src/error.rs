use thiserror::Error;

/// Errors raised by graph construction and analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid identifier `{0}` (expected [a-z][a-z0-9_-]*)")]
    InvalidIdentifier(String),
    #[error("{0} type set must not be empty")]
    EmptyTypeSet(&'static str),
    #[error("duplicate type `{0}` in dictionary")]
    DuplicateType(String),
    #[error("invalid vertex id `{0}`")]
    InvalidVertexId(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("vertex `{0}` needs at least one artifact type")]
    EmptyLabels(String),
    #[error("unknown artifact type `{0}`")]
    UnknownArtifactType(String),
    #[error("unknown trace type `{0}`")]
    UnknownTraceType(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown metric `{name}` (available: {available})")]
    UnknownMetric { name: String, available: String },
    #[error("metric `{metric}`: {message}")]
    BadArgument { metric: String, message: String },
}

pub type Result<T, E = GraphError> = std::result::Result<T, E>;
