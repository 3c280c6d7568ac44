use std::fmt;

use thiserror::Error;

use crate::span::SourceSpan;

/// A positioned syntax error: `<file>:<line>:<col>: expected <x>, found <y>`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: String,
    pub found: String,
    pub hint: Option<String>,
}

impl ParseError {
    pub fn new(span: SourceSpan, expected: impl Into<String>, found: impl Into<String>) -> Self {
        ParseError {
            span,
            expected: expected.into(),
            found: found.into(),
            hint: None,
        }
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.hint = Some(hint.into());
        self
    }

    /// The message without the location prefix.
    pub fn message(&self) -> String {
        let mut m = format!("expected {}, found {}", self.expected, self.found);
        if let Some(h) = &self.hint {
            m.push_str(" (");
            m.push_str(h);
            m.push(')');
        }
        m
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: expected {}, found {}",
            self.span.file, self.span.start_line, self.span.start_col, self.expected, self.found
        )
    }
}

/// A name that is used but never defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unbound {
    pub name: String,
    pub what: &'static str,
    pub span: SourceSpan,
}

impl fmt::Display for Unbound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: undefined {} '{}'", self.span, self.what, self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{0}")]
    Syntax(#[from] ParseError),
    #[error("unresolved names: {}", .0.iter().map(|u| u.to_string()).collect::<Vec<_>>().join("; "))]
    Resolve(Vec<Unbound>),
}
