//! A small declarative language for building forms and supermatrices and
//! invoking the engine's operations.
//!
//! ```text
//! program := stmt (";" stmt)* [";"]
//! stmt    := ("even" | "odd" | "param") name+
//!          | "action" preset | "let" name "=" expr | "check" suite | expr
//! expr    := sum, with ^ (right associative) > unary - > * / > + -
//! call    := name "(" [expr ("," expr)*] [";" binding ("," binding)*] ")"
//! binding := name [":" name]
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

pub mod ast;
mod eval;
pub mod format;
mod lexer;
mod parser;

pub use ast::{Program, Span};
pub use eval::{Evaluator, Outcome, Output, Value};
pub use format::{format_expr, format_program};
pub use parser::{parse, parse_expr};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{span}: syntax error: {message}")]
    Syntax { span: Span, message: String },
    #[error("{span}: '{word}' is a reserved word")]
    ReservedWord { word: String, span: Span },
    /// Unknown names, redeclarations and wrong arities.
    #[error("{span}: {message}")]
    Resolve { span: Span, message: String },
    #[error("{span}: type error: {message}")]
    Type { span: Span, message: String },
    #[error("{span}: {message}")]
    Engine { span: Span, message: String },
}

impl DslError {
    pub(crate) fn syntax(span: Span, message: impl Into<String>) -> Self {
        DslError::Syntax { span, message: message.into() }
    }

    pub fn span(&self) -> Span {
        match self {
            DslError::Syntax { span, .. }
            | DslError::ReservedWord { span, .. }
            | DslError::Resolve { span, .. }
            | DslError::Type { span, .. }
            | DslError::Engine { span, .. } => *span,
        }
    }

    /// Whether the engine rejected otherwise well-formed input.
    pub fn is_engine(&self) -> bool {
        matches!(self, DslError::Engine { .. })
    }

    /// The message followed by the offending source line and a caret
    /// marker under the span.
    pub fn render(&self, src: &str) -> String {
        let span = self.span();
        let line = src.lines().nth(span.line.saturating_sub(1)).unwrap_or("");
        let width = span.len.max(1).min(line.len().saturating_sub(span.column - 1).max(1));
        format!("{}\n  {}\n  {}{}", self, line, " ".repeat(span.column.saturating_sub(1)), "^".repeat(width))
    }
}
