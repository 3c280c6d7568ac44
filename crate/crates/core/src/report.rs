//! Satisfiability reports mapped back to model elements.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::diagnostic::{Code, Diagnostic, Severity};
use crate::dsl::SourceMap;
use crate::model::ElementRef;
use crate::reasoner::{SatStatus, SatVerdict};
use crate::translate::{EntityKind, IriMap};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Overall {
    Consistent,
    Inconsistent,
    Invalid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConceptKind {
    Resource,
    State,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptVerdict {
    pub element: ElementRef,
    pub kind: ConceptKind,
    pub status: SatStatus,
    pub line: u32,
    pub col: u32,
}

impl ConceptVerdict {
    pub fn name(&self) -> String {
        self.element.name()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub model: String,
    pub overall: Overall,
    /// One entry per resource and state class, in declaration order. Empty
    /// when no reasoning took place.
    pub concepts: Vec<ConceptVerdict>,
    pub diagnostics: Vec<Diagnostic>,
    /// Resource definitions and non-initial states in the model.
    pub resources: usize,
    pub states: usize,
    /// Whether the reasoner ran; `false` for validation-only reports.
    pub reasoned: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("UNMAPPED_IRI: class ':{0}' does not correspond to a resource or state")]
    UnmappedIri(String),
}

/// Computes the overall verdict from the diagnostics and concept statuses.
pub fn overall(diagnostics: &[Diagnostic], concepts: &[ConceptVerdict]) -> Overall {
    if diagnostics.iter().any(|d| d.code.is_structural()) {
        Overall::Invalid
    } else if !diagnostics.is_empty() || concepts.iter().any(|c| c.status == SatStatus::Unsat) {
        Overall::Inconsistent
    } else {
        Overall::Consistent
    }
}

/// Report without reasoning: just the diagnostics of parsing and validation.
pub fn validation_report(
    model: &str,
    diagnostics: Vec<Diagnostic>,
    resources: usize,
    states: usize,
) -> CheckReport {
    let mut diagnostics = diagnostics;
    sort_diagnostics(&mut diagnostics);
    CheckReport {
        model: model.to_string(),
        overall: overall(&diagnostics, &[]),
        concepts: Vec::new(),
        diagnostics,
        resources,
        states,
        reasoned: false,
    }
}

/// Maps each verdict to its element and turns unsatisfiable ones into
/// `UNSAT_RESOURCE`/`UNSAT_STATE` diagnostics.
pub fn build_report(
    model: &str,
    verdicts: &[SatVerdict],
    iris: &IriMap,
    spans: &SourceMap,
    diagnostics: Vec<Diagnostic>,
) -> Result<CheckReport, ReportError> {
    let mut diagnostics = diagnostics;
    let mut concepts = Vec::with_capacity(verdicts.len());
    for v in verdicts {
        let element = iris
            .element(EntityKind::Class, &v.iri)
            .ok_or_else(|| ReportError::UnmappedIri(v.iri.clone()))?;
        let kind = match element {
            ElementRef::Resource(_) => ConceptKind::Resource,
            ElementRef::State(_) => ConceptKind::State,
            _ => return Err(ReportError::UnmappedIri(v.iri.clone())),
        };
        let span = spans.get(element).cloned();
        let (line, col) = span
            .as_ref()
            .map_or((0, 0), |s| (s.start_line, s.start_col));
        if v.status == SatStatus::Unsat {
            let name = element.name();
            let d = match kind {
                ConceptKind::Resource => Diagnostic::new(
                    Code::UnsatResource,
                    Some(element.clone()),
                    format!("resource '{name}' can never be instantiated"),
                ),
                ConceptKind::State => Diagnostic::new(
                    Code::UnsatState,
                    Some(element.clone()),
                    format!("state '{name}' can never be active"),
                ),
            };
            diagnostics.push(d.with_span(span));
        }
        concepts.push(ConceptVerdict {
            element: element.clone(),
            kind,
            status: v.status,
            line,
            col,
        });
    }
    sort_diagnostics(&mut diagnostics);
    let resources = concepts
        .iter()
        .filter(|c| c.kind == ConceptKind::Resource)
        .count();
    let states = concepts.len() - resources;
    Ok(CheckReport {
        model: model.to_string(),
        overall: overall(&diagnostics, &concepts),
        concepts,
        diagnostics,
        resources,
        states,
        reasoned: true,
    })
}

/// Errors before warnings, then source order. Diagnostics without a
/// position keep their relative order at the end of their group.
fn sort_diagnostics(ds: &mut [Diagnostic]) {
    ds.sort_by_key(|d| {
        let pos = d.span.as_ref().map(|s| (s.start_line, s.start_col));
        (d.severity, pos.is_none(), pos)
    });
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

/// Diagnostics alone, one per entry, each followed by its location.
pub fn render_diagnostics(r: &CheckReport) -> String {
    let mut out = String::new();
    for d in &r.diagnostics {
        let _ = writeln!(out, "{d}");
        if let Some(s) = &d.span {
            let _ = writeln!(out, "  --> {s}");
        }
    }
    out
}

pub fn render_text(r: &CheckReport) -> String {
    let mut out = render_diagnostics(r);
    if !r.diagnostics.is_empty() {
        out.push('\n');
    }
    if !r.concepts.is_empty() {
        let width = r.concepts.iter().map(|c| c.name().len()).max().unwrap_or(0);
        for c in &r.concepts {
            let kind = match c.kind {
                ConceptKind::Resource => "resource",
                ConceptKind::State => "state   ",
            };
            let status = match c.status {
                SatStatus::Sat => "sat",
                SatStatus::Unsat => "UNSAT",
            };
            let _ = writeln!(out, "  {kind} {:<width$}  {status}", c.name());
        }
        out.push('\n');
    }
    let counts = format!(
        "{}, {}",
        plural(r.resources, "resource"),
        plural(r.states, "state")
    );
    let errors = r
        .diagnostics
        .iter()
        .filter(|d| d.severity == Severity::Error)
        .count();
    let summary = match (r.overall, r.reasoned) {
        (Overall::Invalid, _) => format!("INVALID: {}", plural(errors, "error")),
        (Overall::Consistent, false) => format!("VALID: {counts}"),
        (Overall::Consistent, true) => format!("CONSISTENT: {counts}, all satisfiable"),
        (Overall::Inconsistent, _) => {
            let unsat = r
                .concepts
                .iter()
                .filter(|c| c.status == SatStatus::Unsat)
                .count();
            format!("INCONSISTENT: {counts}, {unsat} unsatisfiable")
        }
    };
    let _ = writeln!(out, "{}: {summary}", r.model);
    out
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonReport<'a> {
    schema_version: u32,
    model: &'a str,
    overall: Overall,
    concepts: Vec<JsonConcept>,
    diagnostics: Vec<JsonDiagnostic<'a>>,
}

#[derive(Serialize)]
struct JsonConcept {
    element: String,
    kind: ConceptKind,
    status: SatStatus,
    line: u32,
    col: u32,
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    severity: Severity,
    code: Code,
    message: &'a str,
    line: u32,
    col: u32,
}

pub fn render_json(r: &CheckReport) -> String {
    let doc = JsonReport {
        schema_version: SCHEMA_VERSION,
        model: &r.model,
        overall: r.overall,
        concepts: r
            .concepts
            .iter()
            .map(|c| JsonConcept {
                element: c.name(),
                kind: c.kind,
                status: c.status,
                line: c.line,
                col: c.col,
            })
            .collect(),
        diagnostics: r
            .diagnostics
            .iter()
            .map(|d| {
                let (line, col) = d.line_col();
                JsonDiagnostic {
                    severity: d.severity,
                    code: d.code,
                    message: &d.message,
                    line,
                    col,
                }
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid_json_with_empty_arrays() {
        let r = validation_report("Empty", Vec::new(), 0, 0);
        let v: serde_json::Value = serde_json::from_str(&render_json(&r)).unwrap();
        assert_eq!(v["schemaVersion"], 1);
        assert_eq!(v["overall"], "consistent");
        assert_eq!(v["concepts"], serde_json::json!([]));
        assert_eq!(v["diagnostics"], serde_json::json!([]));
    }

    #[test]
    fn unmapped_iri_is_an_error() {
        let v = SatVerdict {
            iri: "Ghost".into(),
            status: SatStatus::Sat,
            witness_size: Some(1),
        };
        let err = build_report(
            "M",
            &[v],
            &IriMap::default(),
            &SourceMap::new("m"),
            Vec::new(),
        )
        .unwrap_err();
        assert_eq!(err, ReportError::UnmappedIri("Ghost".into()));
    }

    #[test]
    fn structural_diagnostics_make_the_report_invalid() {
        let d = Diagnostic::new(Code::Parse, None, "expected \"}\", found end of input");
        let r = validation_report("M", vec![d], 0, 0);
        assert_eq!(r.overall, Overall::Invalid);
        assert!(render_text(&r).ends_with("M: INVALID: 1 error\n"));
    }
}
