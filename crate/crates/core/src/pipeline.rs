//! The end-to-end tool chain: model text to report.

use crate::diagnostic::{Code, Diagnostic};
use crate::dsl::{parse_model, ModelError, ParsedModel};
use crate::model::{validate_behavioral_model, validate_resource_model};
use crate::owl::DEFAULT_BASE_IRI;
use crate::reasoner::{bounded_model_search, classify_all, compile_tbox, SatStatus};
use crate::report::{build_report, validation_report, CheckReport};
use crate::translate::{translate_models, TranslateError, Translation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOptions {
    pub base_iri: String,
    /// Cross-check every verdict against the finite-model oracle with
    /// domains up to this size, which must lie in `1..=MAX_BOUND`.
    pub oracle_bound: Option<u32>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            base_iri: DEFAULT_BASE_IRI.to_string(),
            oracle_bound: None,
        }
    }
}

/// A verdict the oracle contradicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub iri: String,
    pub tableau: SatStatus,
    pub bound: u32,
}

impl std::fmt::Display for Disagreement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.tableau {
            SatStatus::Sat => write!(
                f,
                "tableau finds ':{}' satisfiable but no model exists up to size {}",
                self.iri, self.bound
            ),
            SatStatus::Unsat => write!(
                f,
                "tableau finds ':{}' unsatisfiable but the oracle found a model",
                self.iri
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub report: CheckReport,
    /// Present whenever the model was valid enough to translate.
    pub translation: Option<Translation>,
    pub disagreements: Vec<Disagreement>,
}

/// Parses and validates; on failure returns the diagnostics, positioned.
fn front(source: &str, file: &str) -> Result<ParsedModel, (String, Vec<Diagnostic>)> {
    let parsed = match parse_model(source, file) {
        Ok(p) => p,
        Err(ModelError::Syntax(e)) => {
            let d = Diagnostic::new(Code::Parse, None, e.message()).with_span(Some(e.span.clone()));
            return Err((file.to_string(), vec![d]));
        }
        Err(ModelError::Resolve(unbound)) => {
            let ds = unbound
                .into_iter()
                .map(|u| {
                    Diagnostic::new(
                        Code::UnresolvedRef,
                        None,
                        format!("undefined {} '{}'", u.what, u.name),
                    )
                    .with_span(Some(u.span))
                })
                .collect();
            return Err((file.to_string(), ds));
        }
    };
    let mut diags = validate_resource_model(&parsed.resources);
    if let Some(bm) = &parsed.behavior {
        diags.extend(validate_behavioral_model(bm, &parsed.resources));
    }
    if diags.is_empty() {
        Ok(parsed)
    } else {
        let diags = locate(diags, &parsed);
        Err((parsed.resources.name.clone(), diags))
    }
}

fn locate(diags: Vec<Diagnostic>, parsed: &ParsedModel) -> Vec<Diagnostic> {
    diags
        .into_iter()
        .map(|d| {
            let span = d
                .element
                .as_ref()
                .and_then(|e| parsed.spans.get(e))
                .cloned();
            match d.span {
                Some(_) => d,
                None => d.with_span(span),
            }
        })
        .collect()
}

fn counts(parsed: &ParsedModel) -> (usize, usize) {
    let states = parsed
        .behavior
        .as_ref()
        .map_or(0, |b| b.concept_states().count());
    (parsed.resources.resources.len(), states)
}

fn invalid(model: String, diags: Vec<Diagnostic>) -> CheckReport {
    validation_report(&model, diags, 0, 0)
}

/// Parsing and structural validation only.
pub fn validate(source: &str, file: &str) -> CheckReport {
    match front(source, file) {
        Ok(parsed) => {
            let (r, s) = counts(&parsed);
            validation_report(&parsed.resources.name, Vec::new(), r, s)
        }
        Err((model, diags)) => invalid(model, diags),
    }
}

/// Translates a valid model, or returns the report explaining why not.
pub fn translate(source: &str, file: &str, base_iri: &str) -> Result<Translation, CheckReport> {
    let parsed = front(source, file).map_err(|(m, d)| invalid(m, d))?;
    translate_parsed(&parsed, base_iri)
}

fn translate_parsed(parsed: &ParsedModel, base_iri: &str) -> Result<Translation, CheckReport> {
    translate_models(&parsed.resources, parsed.behavior.as_ref(), base_iri).map_err(|e| match e {
        TranslateError::PreconditionViolated(d) => {
            invalid(parsed.resources.name.clone(), locate(d, parsed))
        }
    })
}

/// The full pipeline: parse, validate, translate, classify and report.
///
/// # Panics
///
/// If `opts.oracle_bound` is zero or above [`MAX_BOUND`](crate::reasoner::MAX_BOUND).
pub fn check(source: &str, file: &str, opts: &CheckOptions) -> CheckOutcome {
    let failed = |report| CheckOutcome {
        report,
        translation: None,
        disagreements: Vec::new(),
    };
    let parsed = match front(source, file) {
        Ok(p) => p,
        Err((m, d)) => return failed(invalid(m, d)),
    };
    let translation = match translate_parsed(&parsed, &opts.base_iri) {
        Ok(t) => t,
        Err(r) => return failed(r),
    };
    let tbox = compile_tbox(&translation.ontology);
    let verdicts = classify_all(&tbox);
    let diags = locate(translation.diagnostics.clone(), &parsed);
    let report = build_report(
        &parsed.resources.name,
        &verdicts,
        &translation.iris,
        &parsed.spans,
        diags,
    )
    .expect("every class the translator declares is mapped");

    let mut disagreements = Vec::new();
    if let Some(bound) = opts.oracle_bound {
        for v in &verdicts {
            let found = bounded_model_search(&translation.ontology, &v.iri, bound)
                .unwrap_or_else(|e| panic!("invalid oracle bound: {e}"))
                .is_sat();
            if found != (v.status == SatStatus::Sat) {
                disagreements.push(Disagreement {
                    iri: v.iri.clone(),
                    tableau: v.status,
                    bound,
                });
            }
        }
    }
    CheckOutcome {
        report,
        translation: Some(translation),
        disagreements,
    }
}
