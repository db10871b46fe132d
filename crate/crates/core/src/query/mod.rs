//! A small query language for selecting vertex sets.
//!
//! ```text
//! query  := orExpr ;
//! orExpr := andExpr ( "or" andExpr )* ;
//! andExpr:= unary ( "and" unary )* ;
//! unary  := "not" unary | atom ;
//! atom   := "type:" IDENT | "id:" GLOB | stepFn | "(" query ")" ;
//! stepFn := ("out"|"in"|"both") "(" [ traceList "," ] query ")" ;
//! traceList := IDENT ( "|" IDENT )* ;
//! ```
//!
//! `in(verify, type:unit_test)` holds at a vertex with an incoming `verify`
//! edge from a unit test. Steps are single-hop.

mod ast;
mod eval;
mod parser;

pub use ast::{Glob, Query};
pub use eval::eval_query;
pub use parser::{parse_query, QueryParseError};
