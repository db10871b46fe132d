use std::collections::BTreeSet;
use std::fmt;

use crate::dict::TypeName;
use crate::graph::Direction;

/// An id pattern where `*` matches any run of characters and `?` exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Glob(String);

impl Glob {
    pub fn new(pattern: impl Into<String>) -> Self {
        Glob(pattern.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn matches(&self, text: &str) -> bool {
        let p: Vec<char> = self.0.chars().collect();
        let t: Vec<char> = text.chars().collect();
        // Greedy match with single-star backtracking.
        let (mut pi, mut ti) = (0, 0);
        let mut star: Option<(usize, usize)> = None;
        while ti < t.len() {
            if pi < p.len() && (p[pi] == '?' || p[pi] == t[ti]) {
                pi += 1;
                ti += 1;
            } else if pi < p.len() && p[pi] == '*' {
                star = Some((pi, ti));
                pi += 1;
            } else if let Some((sp, st)) = star {
                pi = sp + 1;
                ti = st + 1;
                star = Some((sp, st + 1));
            } else {
                return false;
            }
        }
        p[pi..].iter().all(|&c| c == '*')
    }
}

impl fmt::Display for Glob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Query {
    TypeIs(TypeName),
    IdGlob(Glob),
    And(Box<Query>, Box<Query>),
    Or(Box<Query>, Box<Query>),
    Not(Box<Query>),
    /// Holds at `v` when a neighbor along a matching edge satisfies `inner`.
    /// `traces: None` accepts every trace type.
    Step {
        direction: Direction,
        traces: Option<BTreeSet<TypeName>>,
        inner: Box<Query>,
    },
}

impl Query {
    pub fn and(a: Query, b: Query) -> Query {
        Query::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Query, b: Query) -> Query {
        Query::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Query) -> Query {
        Query::Not(Box::new(a))
    }

    pub fn step(direction: Direction, traces: Option<BTreeSet<TypeName>>, inner: Query) -> Query {
        Query::Step {
            direction,
            traces,
            inner: Box::new(inner),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Query::TypeIs(_) | Query::IdGlob(_) => 1,
            Query::And(a, b) | Query::Or(a, b) => 1 + a.depth().max(b.depth()),
            Query::Not(a) => 1 + a.depth(),
            Query::Step { inner, .. } => 1 + inner.depth(),
        }
    }
}

/// Canonical form; binary operators are always parenthesized.
impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::TypeIs(t) => write!(f, "type:{t}"),
            Query::IdGlob(g) => write!(f, "id:{g}"),
            Query::And(a, b) => write!(f, "({a} and {b})"),
            Query::Or(a, b) => write!(f, "({a} or {b})"),
            Query::Not(a) => write!(f, "not {a}"),
            Query::Step {
                direction,
                traces,
                inner,
            } => {
                write!(f, "{direction}(")?;
                if let Some(ts) = traces {
                    let names: Vec<&str> = ts.iter().map(TypeName::as_str).collect();
                    write!(f, "{}, ", names.join("|"))?;
                }
                write!(f, "{inner})")
            }
        }
    }
}
