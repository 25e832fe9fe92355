//! The model description language: a line-oriented statement syntax with
//! arithmetic expressions over parameters, generators and 1-forms.
//!
//! ```text
//! param q, r;
//! gen x, y;
//! invertible x, y;
//! rel x*y = q*y*x;
//! auto phi1 { x -> r^-1*x; y -> r^-1*y; }
//! calc { theta t1, t2; twist t1 = phi1; ... }
//! check "name": x*dx == r*dx*x;
//! ```

mod ast;
mod build;
mod eval;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

pub use ast::{
    BinOp, CalcItem, CheckBody, CheckStmt, DeriveStmt, Document, Expr, IndexedEntry, Item, OrderKw,
    Stmt,
};
pub use build::{build_model, BuildOptions};
pub use eval::{Scope, Value};
pub use parser::{parse_document, parse_expr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message} at `{token}`")]
pub struct ParseError {
    pub pos: Pos,
    pub token: String,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, token: &str, message: &str) -> Self {
        ParseError {
            pos,
            token: token.to_string(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error: {0}")]
    Parse(#[from] ParseError),
    #[error("{pos}: {message}")]
    Semantic { pos: Pos, message: String },
}

impl DslError {
    pub fn semantic(pos: Pos, message: impl Into<String>) -> Self {
        DslError::Semantic {
            pos,
            message: message.into(),
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            DslError::Parse(e) => e.pos,
            DslError::Semantic { pos, .. } => *pos,
        }
    }
}

/// `export(parse(text))`.
pub fn export(doc: &Document) -> String {
    doc.to_string()
}
