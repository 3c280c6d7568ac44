//! Diagnostics shared by the validators, the translator and the report.

use std::fmt;

use serde::Serialize;

use crate::model::ElementRef;
use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Code {
    Connectivity,
    DuplicateLabel,
    CollectionHasAttr,
    NormalNoAttr,
    BadCardinality,
    UnresolvedPath,
    NoPath,
    Parse,
    UnsatResource,
    UnsatState,
    NegativeBound,
    DuplicateName,
    UnresolvedRef,
    BadRoot,
    BadState,
    TypeMismatch,
    Cycle,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Connectivity => "CONNECTIVITY",
            Code::DuplicateLabel => "DUPLICATE_LABEL",
            Code::CollectionHasAttr => "COLLECTION_HAS_ATTR",
            Code::NormalNoAttr => "NORMAL_NO_ATTR",
            Code::BadCardinality => "BAD_CARDINALITY",
            Code::UnresolvedPath => "UNRESOLVED_PATH",
            Code::NoPath => "NO_PATH",
            Code::Parse => "PARSE",
            Code::UnsatResource => "UNSAT_RESOURCE",
            Code::UnsatState => "UNSAT_STATE",
            Code::NegativeBound => "NEGATIVE_BOUND",
            Code::DuplicateName => "DUPLICATE_NAME",
            Code::UnresolvedRef => "UNRESOLVED_REF",
            Code::BadRoot => "BAD_ROOT",
            Code::BadState => "BAD_STATE",
            Code::TypeMismatch => "TYPE_MISMATCH",
            Code::Cycle => "CYCLE",
        }
    }

    /// Every code is currently an error.
    pub fn severity(self) -> Severity {
        Severity::Error
    }

    /// Codes that make a model invalid, i.e. stop the pipeline before reasoning.
    pub fn is_structural(self) -> bool {
        !matches!(
            self,
            Code::UnsatResource | Code::UnsatState | Code::NegativeBound
        )
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub element: Option<ElementRef>,
    pub span: Option<SourceSpan>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: Code, element: Option<ElementRef>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: code.severity(),
            code,
            element,
            span: None,
            message: message.into(),
        }
    }

    pub fn with_span(mut self, span: Option<SourceSpan>) -> Self {
        self.span = span;
        self
    }

    pub fn line_col(&self) -> (u32, u32) {
        self.span
            .as_ref()
            .map(|s| (s.start_line, s.start_col))
            .unwrap_or((0, 0))
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}] {}", self.code, self.message)
    }
}
