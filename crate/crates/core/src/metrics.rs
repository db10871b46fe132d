//! Graph metrics: size counts, coupling factors and reachability coverage.
//!
//! Every metric is linear in the graph size, except that a catalog call may
//! run one traversal per vertex.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::dict::{type_set, TypeName, TypeSet};
use crate::error::{GraphError, Result};
use crate::graph::{Direction, SoftwareGraph, VertexId};

/// Names accepted by [`evaluate_metric`].
pub const CATALOG: &[&str] = &["count_by_type", "coupling", "coverage", "reachable"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricValue {
    Count(u64),
    Ratio(f64),
}

impl MetricValue {
    pub fn as_f64(self) -> f64 {
        match self {
            MetricValue::Count(n) => n as f64,
            MetricValue::Ratio(r) => r,
        }
    }
}

impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricValue::Count(n) => write!(f, "{n}"),
            MetricValue::Ratio(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scope {
    Graph,
    Vertex(VertexId),
}

/// Vertex ids attached to a result, e.g. the uncovered targets of a coverage
/// metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witnesses {
    pub label: &'static str,
    pub ids: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricResult {
    pub name: String,
    pub value: MetricValue,
    pub scope: Scope,
    pub details: Option<Witnesses>,
    /// Set when the value holds over an empty target set.
    pub vacuous: bool,
}

impl MetricResult {
    fn new(name: &str, value: MetricValue, scope: Scope) -> Self {
        MetricResult {
            name: name.to_string(),
            value,
            scope,
            details: None,
            vacuous: false,
        }
    }
}

/// `name value [label: id,id,...] [(vacuous)]`
impl fmt::Display for MetricResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name, self.value)?;
        if let Some(w) = &self.details {
            if !w.ids.is_empty() {
                let ids: Vec<&str> = w.ids.iter().map(VertexId::as_str).collect();
                write!(f, " {}: {}", w.label, ids.join(","))?;
            }
        }
        if self.vacuous {
            f.write_str(" (vacuous)")?;
        }
        Ok(())
    }
}

/// Number of vertices labeled `artifact_type`.
pub fn count_by_type(g: &SoftwareGraph, artifact_type: &str) -> Result<MetricResult> {
    g.dictionary().artifact_type(artifact_type)?;
    let n = g
        .vertices()
        .filter(|(_, ls)| ls.contains(artifact_type))
        .count();
    Ok(MetricResult::new(
        "count_by_type",
        MetricValue::Count(n as u64),
        Scope::Graph,
    ))
}

/// Number of distinct neighbors of `v`; see [`SoftwareGraph::neighbors`].
pub fn coupling(
    g: &SoftwareGraph,
    v: &str,
    direction: Direction,
    attr_filter: Option<&TypeSet>,
    trace_filter: Option<&TypeSet>,
) -> Result<MetricResult> {
    let n = g.neighbors(v, direction, trace_filter, attr_filter)?.len();
    Ok(MetricResult::new(
        "coupling",
        MetricValue::Count(n as u64),
        Scope::Vertex(g.vertex(v)?.clone()),
    ))
}

/// Every vertex reachable from some source along directed edges whose type
/// passes `trace_filter`. Sources reach themselves.
pub fn reachable_from<I, S>(
    g: &SoftwareGraph,
    sources: I,
    trace_filter: Option<&TypeSet>,
) -> Result<BTreeSet<VertexId>>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    if let Some(f) = trace_filter {
        g.dictionary().check_trace_types(f)?;
    }
    let mut seen = BTreeSet::new();
    let mut stack = Vec::new();
    for s in sources {
        let v = g.vertex(s.as_ref())?;
        if seen.insert(v) {
            stack.push(v);
        }
    }
    while let Some(v) = stack.pop() {
        for (t, w) in g.out_edges(v.as_str()) {
            if trace_filter.is_none_or(|f| f.contains(t)) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    Ok(seen.into_iter().cloned().collect())
}

/// Which vertices a coverage metric must reach.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Type(TypeName),
    /// Every vertex not labeled with the source type.
    AllOthers,
}

impl Target {
    pub const ALL_OTHERS: &'static str = "all_others";

    pub fn parse(s: &str) -> Result<Self> {
        if s == Self::ALL_OTHERS {
            Ok(Target::AllOthers)
        } else {
            TypeName::new(s).map(Target::Type)
        }
    }
}

/// Fraction of target vertices reachable from at least one vertex labeled
/// `source_type`. Uncovered targets are listed in `details`. With no targets
/// the value is 1 and `vacuous` is set.
pub fn coverage(
    g: &SoftwareGraph,
    source_type: &str,
    target: &Target,
    trace_filter: Option<&TypeSet>,
) -> Result<MetricResult> {
    let dict = g.dictionary();
    dict.artifact_type(source_type)?;
    if let Target::Type(t) = target {
        dict.artifact_type(t.as_str())?;
    }
    let sources = g
        .vertices()
        .filter(|(_, ls)| ls.contains(source_type))
        .map(|(v, _)| v);
    let reached = reachable_from(g, sources, trace_filter)?;

    let is_target = |ls: &TypeSet| match target {
        Target::Type(t) => ls.contains(t),
        Target::AllOthers => !ls.contains(source_type),
    };
    let mut total = 0usize;
    let mut uncovered = Vec::new();
    for (v, _) in g.vertices().filter(|(_, ls)| is_target(ls)) {
        total += 1;
        if !reached.contains(v) {
            uncovered.push(v.clone());
        }
    }
    let value = if total == 0 {
        1.0
    } else {
        (total - uncovered.len()) as f64 / total as f64
    };
    let mut result = MetricResult::new("coverage", MetricValue::Ratio(value), Scope::Graph);
    result.details = Some(Witnesses {
        label: "uncovered",
        ids: uncovered,
    });
    result.vacuous = total == 0;
    Ok(result)
}

/// Named string arguments for [`evaluate_metric`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MetricArgs(BTreeMap<String, String>);

impl MetricArgs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.insert(key, value);
        self
    }

    pub fn insert(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for MetricArgs {
    fn from_iter<T: IntoIterator<Item = (K, V)>>(iter: T) -> Self {
        MetricArgs(iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }
}

struct ArgReader<'a> {
    metric: &'a str,
    args: &'a MetricArgs,
}

impl<'a> ArgReader<'a> {
    fn bad(&self, message: String) -> GraphError {
        GraphError::BadArgument {
            metric: self.metric.to_string(),
            message,
        }
    }

    fn allow(&self, keys: &[&str]) -> Result<()> {
        match self.args.0.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(self.bad(format!(
                "unexpected argument `{k}` (accepted: {})",
                keys.join(", ")
            ))),
            None => Ok(()),
        }
    }

    fn required(&self, key: &str) -> Result<&'a str> {
        self.args
            .get(key)
            .ok_or_else(|| self.bad(format!("missing argument `{key}`")))
    }

    fn list(&self, key: &str) -> Option<Vec<&'a str>> {
        self.args.get(key).map(|s| {
            s.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect()
        })
    }

    fn types(&self, key: &str) -> Result<Option<TypeSet>> {
        self.list(key).map(type_set).transpose()
    }
}

/// Looks `name` up in [`CATALOG`] and runs it.
///
/// | metric          | arguments                                        |
/// |-----------------|--------------------------------------------------|
/// | `count_by_type` | `type`                                           |
/// | `coupling`      | `vertex`, `direction`?, `artifacts`?, `traces`?  |
/// | `reachable`     | `sources`, `traces`?                             |
/// | `coverage`      | `source`, `target`, `traces`?                    |
///
/// List arguments are comma separated; `direction` defaults to `out`.
pub fn evaluate_metric(g: &SoftwareGraph, name: &str, args: &MetricArgs) -> Result<MetricResult> {
    let r = ArgReader { metric: name, args };
    match name {
        "count_by_type" => {
            r.allow(&["type"])?;
            count_by_type(g, r.required("type")?)
        }
        "coupling" => {
            r.allow(&["vertex", "direction", "artifacts", "traces"])?;
            let direction = match args.get("direction") {
                Some(d) => d.parse().map_err(|e| r.bad(e))?,
                None => Direction::Out,
            };
            coupling(
                g,
                r.required("vertex")?,
                direction,
                r.types("artifacts")?.as_ref(),
                r.types("traces")?.as_ref(),
            )
        }
        "reachable" => {
            r.allow(&["sources", "traces"])?;
            r.required("sources")?;
            let sources = r.list("sources").unwrap_or_default();
            let reached = reachable_from(g, &sources, r.types("traces")?.as_ref())?;
            let mut result = MetricResult::new(
                "reachable",
                MetricValue::Count(reached.len() as u64),
                Scope::Graph,
            );
            result.details = Some(Witnesses {
                label: "reached",
                ids: reached.into_iter().collect(),
            });
            Ok(result)
        }
        "coverage" => {
            r.allow(&["source", "target", "traces"])?;
            coverage(
                g,
                r.required("source")?,
                &Target::parse(r.required("target")?)?,
                r.types("traces")?.as_ref(),
            )
        }
        _ => Err(GraphError::UnknownMetric {
            name: name.to_string(),
            available: CATALOG.join(", "),
        }),
    }
}
