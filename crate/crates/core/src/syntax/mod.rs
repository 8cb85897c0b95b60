//! Concrete syntax: model files, modal formulas and first-order formulas.
//!
//! Modal formulas use `~` (negation), `&` (conjunction), `|` and `->` (sugar),
//! `<>` (diamond), `[]` (box, sugar) and `.-` (truncated subtraction of a rational
//! literal). Binding strength, tightest first: prefix operators, `.-`, `&`, `|`,
//! `->`. First-order formulas add `E x. φ`, `p(x)`, `R(x,y)` and `x = y`; the
//! scope of a quantifier extends as far right as possible.

mod formula_parser;
mod lexer;
mod model_file;
mod printer;

use std::fmt;

use thiserror::Error;

pub use formula_parser::{parse_fol, parse_modal};
pub use model_file::{parse_model, parse_state_function, print_model, print_state_function};
pub use printer::{print_fol, print_modal};

/// Location of a piece of input text. Lines and columns are 1-based; columns count
/// characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub begin: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn at(text: &str, begin: usize, end: usize) -> SourceSpan {
        let before = &text[..begin];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = text[line_start..begin].chars().count() + 1;
        SourceSpan {
            begin,
            end,
            line,
            column,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    /// Token kinds that would have been accepted at `span`, if known.
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn new(span: SourceSpan, message: impl Into<String>) -> ParseError {
        ParseError {
            span,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    pub(crate) fn expecting(mut self, expected: &[&str]) -> ParseError {
        self.expected = expected.iter().map(|s| s.to_string()).collect();
        self
    }
}
