//! Artifact and trace type dictionaries.

use std::borrow::Borrow;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{GraphError, Result};

/// Built-in artifact types.
pub const DEFAULT_ARTIFACT_TYPES: &[&str] = &[
    "class",
    "coding standard",
    "field",
    "grammar",
    "interface",
    "library",
    "method",
    "module",
    "requirement",
    "test suite",
    "use case",
    "unit test",
];

/// Built-in trace types.
pub const DEFAULT_TRACE_TYPES: &[&str] = &[
    "apply to",
    "call",
    "contain",
    "define",
    "depend on",
    "generate",
    "implement",
    "limit",
    "require",
    "return",
    "use",
    "verify",
];

/// Returns true when `s` matches `[a-z][a-z0-9_-]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '-')
}

/// Maps a human-readable type name to identifier form: trimmed, lowercased,
/// whitespace runs replaced by `_`. The result is not guaranteed to be a valid
/// identifier.
pub fn canonicalize(name: &str) -> String {
    name.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join("_")
}

/// A validated artifact or trace type name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeName(Arc<str>);

impl TypeName {
    pub fn new(s: impl AsRef<str>) -> Result<Self> {
        let s = s.as_ref();
        if is_identifier(s) {
            Ok(TypeName(s.into()))
        } else {
            Err(GraphError::InvalidIdentifier(s.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for TypeName {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for TypeName {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl FromStr for TypeName {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self> {
        TypeName::new(s)
    }
}

pub type TypeSet = BTreeSet<TypeName>;

/// Parses a list of names into a [`TypeSet`], rejecting malformed identifiers.
pub fn type_set<I, S>(names: I) -> Result<TypeSet>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    names.into_iter().map(|s| TypeName::new(s.as_ref())).collect()
}

/// The artifact type set and trace type set a graph is typed over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDictionary {
    artifact_types: TypeSet,
    trace_types: TypeSet,
}

impl TypeDictionary {
    /// Builds a user dictionary. Both sets must be non-empty, free of
    /// duplicates, and made of canonical identifiers.
    pub fn new<A, T, S1, S2>(artifact_types: A, trace_types: T) -> Result<Self>
    where
        A: IntoIterator<Item = S1>,
        T: IntoIterator<Item = S2>,
        S1: AsRef<str>,
        S2: AsRef<str>,
    {
        let artifact_types = Self::collect_unique(artifact_types, "artifact")?;
        let trace_types = Self::collect_unique(trace_types, "trace")?;
        Ok(TypeDictionary {
            artifact_types,
            trace_types,
        })
    }

    fn collect_unique<I, S>(names: I, what: &'static str) -> Result<TypeSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = TypeSet::new();
        for name in names {
            let ty = TypeName::new(name.as_ref())?;
            if !set.insert(ty) {
                return Err(GraphError::DuplicateType(name.as_ref().to_string()));
            }
        }
        if set.is_empty() {
            return Err(GraphError::EmptyTypeSet(what));
        }
        Ok(set)
    }

    /// A dictionary with no types at all. Only reachable through derived
    /// graphs (empty views) and documents that opt out of the defaults.
    pub(crate) fn empty() -> Self {
        TypeDictionary {
            artifact_types: TypeSet::new(),
            trace_types: TypeSet::new(),
        }
    }

    pub(crate) fn from_sets(artifact_types: TypeSet, trace_types: TypeSet) -> Self {
        TypeDictionary {
            artifact_types,
            trace_types,
        }
    }

    pub fn artifact_types(&self) -> &TypeSet {
        &self.artifact_types
    }

    pub fn trace_types(&self) -> &TypeSet {
        &self.trace_types
    }

    pub fn has_artifact_type(&self, name: &str) -> bool {
        self.artifact_types.contains(name)
    }

    pub fn has_trace_type(&self, name: &str) -> bool {
        self.trace_types.contains(name)
    }

    /// Adds an artifact type; returns false if it was already present.
    pub fn add_artifact_type(&mut self, ty: TypeName) -> bool {
        self.artifact_types.insert(ty)
    }

    /// Adds a trace type; returns false if it was already present.
    pub fn add_trace_type(&mut self, ty: TypeName) -> bool {
        self.trace_types.insert(ty)
    }

    pub fn artifact_type(&self, name: &str) -> Result<TypeName> {
        self.artifact_types
            .get(name)
            .cloned()
            .ok_or_else(|| GraphError::UnknownArtifactType(name.to_string()))
    }

    pub fn trace_type(&self, name: &str) -> Result<TypeName> {
        self.trace_types
            .get(name)
            .cloned()
            .ok_or_else(|| GraphError::UnknownTraceType(name.to_string()))
    }

    /// Fails on the first artifact type not in the dictionary.
    pub fn check_artifact_types<'a>(&self, types: impl IntoIterator<Item = &'a TypeName>) -> Result<()> {
        for ty in types {
            if !self.artifact_types.contains(ty) {
                return Err(GraphError::UnknownArtifactType(ty.to_string()));
            }
        }
        Ok(())
    }

    /// Fails on the first trace type not in the dictionary.
    pub fn check_trace_types<'a>(&self, types: impl IntoIterator<Item = &'a TypeName>) -> Result<()> {
        for ty in types {
            if !self.trace_types.contains(ty) {
                return Err(GraphError::UnknownTraceType(ty.to_string()));
            }
        }
        Ok(())
    }

    /// True when every type of `other` is also in `self`.
    pub fn contains_all(&self, other: &TypeDictionary) -> bool {
        self.artifact_types.is_superset(&other.artifact_types)
            && self.trace_types.is_superset(&other.trace_types)
    }
}

impl Default for TypeDictionary {
    fn default() -> Self {
        let artifacts = DEFAULT_ARTIFACT_TYPES.iter().map(|s| canonicalize(s));
        let traces = DEFAULT_TRACE_TYPES.iter().map(|s| canonicalize(s));
        TypeDictionary::new(artifacts, traces).expect("built-in dictionary is valid")
    }
}
