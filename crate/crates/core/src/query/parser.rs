use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::ast::{Glob, Query};
use crate::dict::{is_identifier, TypeName};
use crate::graph::Direction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct QueryParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    pub found: String,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for QueryParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at line {}, column {}: expected ",
            self.line, self.column
        )?;
        match self.expected.as_slice() {
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Colon,
    LParen,
    RParen,
    Comma,
    Pipe,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let single = match c {
            ':' => Some(Tok::Colon),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '|' => Some(Tok::Pipe),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            column += 1;
            out.push(Token { tok, line: l, column: col });
        } else if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            chars.next();
            column += 1;
        } else {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || ":(),|".contains(c) {
                    break;
                }
                word.push(c);
                chars.next();
                column += 1;
            }
            out.push(Token {
                tok: Tok::Word(word),
                line: l,
                column: col,
            });
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    out
}

const ATOM_START: &[&str] = &["`type:`", "`id:`", "`not`", "`out(`", "`in(`", "`both(`", "`(`"];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> QueryParseError {
        let t = &self.tokens[self.pos];
        QueryParseError {
            line: t.line,
            column: t.column,
            found: t.tok.to_string(),
            expected: expected.to_vec(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), QueryParseError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    fn query(&mut self) -> Result<Query, QueryParseError> {
        let mut lhs = self.and_expr()?;
        while self.is_word("or") {
            self.advance();
            lhs = Query::or(lhs, self.and_expr()?);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Query, QueryParseError> {
        let mut lhs = self.unary()?;
        while self.is_word("and") {
            self.advance();
            lhs = Query::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Query, QueryParseError> {
        if self.is_word("not") {
            self.advance();
            return Ok(Query::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Query, QueryParseError> {
        let word = match self.peek() {
            Tok::LParen => {
                self.advance();
                let q = self.query()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(q);
            }
            Tok::Word(w) => w.clone(),
            _ => return Err(self.error(ATOM_START)),
        };
        match word.as_str() {
            "type" => {
                self.advance();
                self.expect(Tok::Colon, "`:`")?;
                Ok(Query::TypeIs(self.ident()?))
            }
            "id" => {
                self.advance();
                self.expect(Tok::Colon, "`:`")?;
                match self.peek() {
                    Tok::Word(w) => {
                        let g = Glob::new(w.clone());
                        self.advance();
                        Ok(Query::IdGlob(g))
                    }
                    _ => Err(self.error(&["id pattern"])),
                }
            }
            "out" | "in" | "both" => {
                let direction: Direction = word.parse().expect("direction keyword");
                self.advance();
                self.expect(Tok::LParen, "`(`")?;
                let traces = if matches!(self.peek(), Tok::Word(_))
                    && matches!(self.peek_at(1), Tok::Comma | Tok::Pipe)
                {
                    let ts = self.trace_list()?;
                    self.expect(Tok::Comma, "`,`")?;
                    Some(ts)
                } else {
                    None
                };
                let inner = self.query()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Query::step(direction, traces, inner))
            }
            _ => Err(self.error(ATOM_START)),
        }
    }

    fn trace_list(&mut self) -> Result<BTreeSet<TypeName>, QueryParseError> {
        let mut ts = BTreeSet::new();
        ts.insert(self.ident()?);
        while *self.peek() == Tok::Pipe {
            self.advance();
            ts.insert(self.ident()?);
        }
        Ok(ts)
    }

    fn ident(&mut self) -> Result<TypeName, QueryParseError> {
        match self.peek() {
            Tok::Word(w) if is_identifier(w) => {
                let t = TypeName::new(w.clone()).expect("checked identifier");
                self.advance();
                Ok(t)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }
}

/// Parses a query. Whitespace (including newlines) between tokens is ignored.
pub fn parse_query(text: &str) -> Result<Query, QueryParseError> {
    let mut p = Parser {
        tokens: lex(text),
        pos: 0,
    };
    if *p.peek() == Tok::Eof {
        return Err(p.error(&["query"]));
    }
    let q = p.query()?;
    if *p.peek() != Tok::Eof {
        let expected: &[&str] = if *p.peek() == Tok::RParen {
            &["end of input"]
        } else {
            &["`and`", "`or`", "end of input"]
        };
        return Err(p.error(expected));
    }
    Ok(q)
}
