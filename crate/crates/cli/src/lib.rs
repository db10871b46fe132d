//! The `swgraph` command line: load `.sg` graphs, validate them, cut views,
//! apply abstraction maps, evaluate metrics, run queries and export DOT.
//!
//! Exit codes: 0 on success, 1 for domain failures (validation violations,
//! a metric below `--fail-below`, output errors), 2 for usage and parse
//! errors, including references to types the graph does not declare.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use swgraph::io::LoadErrorKind;
use swgraph::map::{self, Compositions, Relabels};
use swgraph::{
    eval_query, evaluate_metric, export_dot, parse_query, serialize_graph, view, view_stats,
    DotOptions, GraphDocument, GraphError, LoadError, MapSpec, MetricArgs, SoftwareGraph,
    TypeName, ViewSpec,
};
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "swgraph", version)]
#[command(about = "Typed graph models of software architecture", long_about = None)]
struct Cli {
    /// Write results to this file instead of standard output
    #[arg(short, long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a graph file and report every violation
    Validate {
        /// Graph in `.sg` format (`-` reads standard input)
        file: PathBuf,
    },
    /// Restrict a graph to the given artifact and trace types
    View {
        file: PathBuf,
        /// Artifact types to keep (comma separated)
        #[arg(long, value_delimiter = ',', required = true, num_args = 1)]
        artifacts: Vec<String>,
        /// Trace types to keep (comma separated)
        #[arg(long, value_delimiter = ',', required = true, num_args = 1)]
        traces: Vec<String>,
        /// Only print the vertex and edge counts of the view
        #[arg(long, conflicts_with = "dot")]
        stats: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Relabel edges and compose consecutive edges up to a fixpoint
    Map {
        file: PathBuf,
        /// A named map; `class-diagram` yields classes joined by `depend`
        #[arg(long, value_parser = ["class-diagram"], conflicts_with_all = ["relabel", "compose"])]
        preset: Option<String>,
        /// Renames such as `contain=depend,return=depend`
        #[arg(long, value_name = "FROM=TO,...")]
        relabel: Vec<String>,
        /// Composition rules such as `depend,depend=depend`
        #[arg(long, value_name = "X,Y=Z,...")]
        compose: Vec<String>,
        #[arg(long)]
        dot: bool,
    },
    /// Evaluate a metric (count_by_type, coupling, coverage, reachable)
    Metric(MetricCommand),
    /// Print the ids of the vertices matching a query, one per line
    Query {
        file: PathBuf,
        /// e.g. `type:method and not in(verify, type:unit_test)`
        expr: String,
    },
    /// Re-emit a graph in canonical `.sg` form or as DOT
    Export {
        file: PathBuf,
        #[arg(long)]
        dot: bool,
        /// Omit trace types from DOT edges
        #[arg(long, requires = "dot")]
        no_edge_labels: bool,
        /// Group vertices of this artifact type into a DOT cluster
        #[arg(long, requires = "dot", value_name = "TYPE")]
        cluster_by: Option<String>,
    },
}

#[derive(Args, Debug)]
struct MetricCommand {
    file: PathBuf,
    name: String,
    /// Artifact type counted by `count_by_type`
    #[arg(long = "type", value_name = "TYPE")]
    type_: Option<String>,
    /// Vertex whose neighbours `coupling` counts
    #[arg(long)]
    vertex: Option<String>,
    /// out, in or both
    #[arg(long)]
    direction: Option<String>,
    #[arg(long)]
    artifacts: Option<String>,
    #[arg(long)]
    traces: Option<String>,
    /// Start vertices for `reachable` (comma separated)
    #[arg(long)]
    sources: Option<String>,
    /// Source artifact type for `coverage`
    #[arg(long)]
    source: Option<String>,
    /// Target artifact type for `coverage`, or `all_others`
    #[arg(long)]
    target: Option<String>,
    /// Exit with status 1 when the value is below this threshold
    #[arg(long, value_name = "X")]
    fail_below: Option<f64>,
}

impl MetricCommand {
    fn args(&self) -> MetricArgs {
        [
            ("type", &self.type_),
            ("vertex", &self.vertex),
            ("direction", &self.direction),
            ("artifacts", &self.artifacts),
            ("traces", &self.traces),
            ("sources", &self.sources),
            ("source", &self.source),
            ("target", &self.target),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v.as_str())))
        .collect()
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Load { path: String, source: LoadError },
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Query(String),
    #[error("{0}")]
    Failed(String),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: io::Error },
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Graph(_) | CliError::Query(_) => 2,
            CliError::Load { source, .. } if is_usage(&source.kind) => 2,
            CliError::Load { .. } => 1,
            CliError::Failed(_) | CliError::Output { .. } => 1,
        }
    }
}

/// Malformed lines and undeclared types are treated like mistyped
/// arguments; dangling or duplicate declarations are model defects.
fn is_usage(kind: &LoadErrorKind) -> bool {
    matches!(
        kind,
        LoadErrorKind::Syntax(_)
            | LoadErrorKind::UnknownArtifactType(_)
            | LoadErrorKind::UnknownTraceType(_)
    )
}

/// Runs one invocation. `args` includes the program name. Results go to
/// `out` (or the `--output` file), diagnostics to `err`; the return value
/// is the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };

    let mut buffer = Vec::new();
    let outcome = execute(&cli.command, &mut buffer, err);
    // Results are written even when a threshold fails, so CI logs show them.
    let written = match &cli.output {
        Some(path) => fs::write(path, &buffer).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        }),
        None => out.write_all(&buffer).map_err(|source| CliError::Output {
            path: "standard output".to_string(),
            source,
        }),
    };
    match outcome.and(written) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command, out: &mut Vec<u8>, err: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Validate { file } => {
            let doc = read_document(file)?;
            let violations = doc.violations();
            if violations.is_empty() {
                let g = doc.into_graph().map_err(|e| load_error(file, e))?;
                writeln!(out, "OK: {} vertices, {} edges", g.vertex_count(), g.edge_count())
                    .expect("write to memory");
                return Ok(());
            }
            for v in &violations {
                let _ = writeln!(err, "{}: {v}", file.display());
            }
            let noun = if violations.len() == 1 { "violation" } else { "violations" };
            let summary = format!("{} {noun}", violations.len());
            if violations.iter().any(|v| is_usage(&v.kind)) {
                Err(CliError::Usage(summary))
            } else {
                Err(CliError::Failed(summary))
            }
        }
        Command::View {
            file,
            artifacts,
            traces,
            stats,
            dot,
        } => {
            let g = load(file)?;
            let spec = ViewSpec::new(artifacts, traces)?;
            if *stats {
                let (v, e) = view_stats(&g, &spec)?;
                writeln!(out, "{v} vertices, {e} edges").expect("write to memory");
                return Ok(());
            }
            emit_graph(out, &view(&g, &spec)?, *dot);
            Ok(())
        }
        Command::Map {
            file,
            preset,
            relabel,
            compose,
            dot,
        } => {
            let g = load(file)?;
            let result = if preset.is_some() {
                map::class_diagram(&g)?
            } else if relabel.is_empty() && compose.is_empty() {
                return Err(CliError::Usage(
                    "map needs --preset, --relabel or --compose".to_string(),
                ));
            } else {
                let spec = MapSpec {
                    relabels: parse_relabels(relabel)?,
                    compositions: parse_compositions(compose)?,
                };
                map::apply(&g, &spec)?
            };
            emit_graph(out, &result, *dot);
            Ok(())
        }
        Command::Metric(m) => {
            let g = load(&m.file)?;
            let result = evaluate_metric(&g, &m.name, &m.args())?;
            writeln!(out, "{result}").expect("write to memory");
            match m.fail_below {
                Some(threshold) if result.value.as_f64() < threshold => Err(CliError::Failed(
                    format!("{} {} is below {threshold}", result.name, result.value),
                )),
                _ => Ok(()),
            }
        }
        Command::Query { file, expr } => {
            let g = load(file)?;
            let q = parse_query(expr).map_err(|e| {
                let line = expr.lines().nth(e.line - 1).unwrap_or("");
                CliError::Query(format!(
                    "{e}\n  {line}\n  {:>width$}",
                    "^",
                    width = e.column
                ))
            })?;
            for id in eval_query(&g, &q)? {
                writeln!(out, "{id}").expect("write to memory");
            }
            Ok(())
        }
        Command::Export {
            file,
            dot,
            no_edge_labels,
            cluster_by,
        } => {
            let g = load(file)?;
            if !*dot {
                out.extend_from_slice(serialize_graph(&g).as_bytes());
                return Ok(());
            }
            let cluster_by = match cluster_by {
                Some(name) => Some(g.dictionary().artifact_type(name)?.clone()),
                None => None,
            };
            let options = DotOptions {
                label_edges: !no_edge_labels,
                cluster_by,
            };
            out.extend_from_slice(export_dot(&g, &options).as_bytes());
            Ok(())
        }
    }
}

fn emit_graph(out: &mut Vec<u8>, g: &SoftwareGraph, dot: bool) {
    let text = if dot {
        export_dot(g, &DotOptions::default())
    } else {
        serialize_graph(g)
    };
    out.extend_from_slice(text.as_bytes());
}

fn read_document(file: &Path) -> Result<GraphDocument, CliError> {
    let text = if file == Path::new("-") {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
        text
    } else {
        fs::read_to_string(file)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))?
    };
    GraphDocument::parse(&text)
        .map(|doc| doc.with_source(file))
        .map_err(|e| load_error(file, e))
}

fn load(file: &Path) -> Result<SoftwareGraph, CliError> {
    read_document(file)?
        .into_graph()
        .map_err(|e| load_error(file, e))
}

fn load_error(file: &Path, source: LoadError) -> CliError {
    CliError::Load {
        path: file.display().to_string(),
        source,
    }
}

fn type_name(s: &str) -> Result<TypeName, CliError> {
    Ok(TypeName::new(s.trim())?)
}

fn parse_relabels(values: &[String]) -> Result<Relabels, CliError> {
    let mut relabels = Relabels::new();
    for item in values.iter().flat_map(|v| v.split(',')) {
        let (from, to) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--relabel expects FROM=TO, got `{item}`")))?;
        relabels.insert(type_name(from)?, type_name(to)?);
    }
    Ok(relabels)
}

/// Rules are `X,Y=Z` joined by commas, so the items alternate between a
/// bare first type and a `second=result` pair.
fn parse_compositions(values: &[String]) -> Result<Compositions, CliError> {
    let mut compositions = Compositions::new();
    for value in values {
        let items: Vec<&str> = value.split(',').collect();
        let bad = || CliError::Usage(format!("--compose expects X,Y=Z[,X,Y=Z...], got `{value}`"));
        if !items.len().is_multiple_of(2) {
            return Err(bad());
        }
        for pair in items.chunks(2) {
            let (second, result) = pair[1].split_once('=').ok_or_else(bad)?;
            if pair[0].contains('=') {
                return Err(bad());
            }
            compositions.insert(
                (type_name(pair[0])?, type_name(second)?),
                type_name(result)?,
            );
        }
    }
    Ok(compositions)
}
