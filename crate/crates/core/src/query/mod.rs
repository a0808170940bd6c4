//! Textual query syntax.
//!
//! Queries are compositional: every operator is written as a function call
//! over its conditions and input expressions, e.g.
//!
//! ```text
//! select(exists(hasMeasure("stroke deaths")), db)
//! groupagg([hasChar("black women"): unionMerge, hasChar("white women"): unionMerge], db)
//! rollup("black women", db)
//! ```
//!
//! Macros (`join`, `rollup`, `drilldown`, `compare`) are expanded while
//! parsing, so the rewriter and evaluator only see core operators.

mod explain;
mod lexer;
mod parser;
mod render;
mod rewrite;

use std::fmt;

use thiserror::Error;

pub use explain::{explain_plan, render_tree};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse_query;
pub use render::{quote, render};
pub use rewrite::{rewrite, rewrite_traced, rules, RewriteRule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical(String),
    Syntax { found: String },
    UnknownOperator(String),
    UnknownCondition(String),
    UnknownAggregator(String),
    UnknownSorter(String),
    UnknownRelation(String),
    ArityMismatch { operator: String, expected: usize },
    InvalidLabel(String),
    Macro(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Lexical(msg) => write!(f, "lexical error: {msg}"),
            ParseErrorKind::Syntax { found } => write!(f, "syntax error: unexpected {found}"),
            ParseErrorKind::UnknownOperator(name) => {
                write!(f, "unknown operator or macro `{name}`")
            }
            ParseErrorKind::UnknownCondition(name) => write!(f, "unknown condition `{name}`"),
            ParseErrorKind::UnknownAggregator(name) => write!(f, "unknown aggregator `{name}`"),
            ParseErrorKind::UnknownSorter(name) => write!(f, "unknown sorter `{name}`"),
            ParseErrorKind::UnknownRelation(name) => write!(f, "unknown relation `{name}`"),
            ParseErrorKind::ArityMismatch { operator, expected } => {
                write!(
                    f,
                    "arity mismatch: `{operator}` takes {expected} argument(s)"
                )
            }
            ParseErrorKind::InvalidLabel(msg) => write!(f, "invalid label: {msg}"),
            ParseErrorKind::Macro(msg) => write!(f, "invalid macro call: {msg}"),
        }
    }
}

/// A parse failure with its 1-based position and the tokens that would
/// have been accepted there.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.kind)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}
