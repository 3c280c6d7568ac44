//! Python bindings: parse a model, then validate, translate or check it.
//!
//! Reports are returned as the same dictionaries the CLI prints with
//! `--format json`. Malformed input raises `ValueError`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use restcheck_core::dsl::{self, ParsedModel};
use restcheck_core::mocl;
use restcheck_core::model::navigation_path;
use restcheck_core::owl::{parse_functional_syntax, serialize, DEFAULT_BASE_IRI};
use restcheck_core::pipeline::{self, CheckOptions};
use restcheck_core::reasoner::{compile_tbox, is_satisfiable as tableau_sat, SatStatus, MAX_BOUND};
use restcheck_core::report::{render_diagnostics, render_json, CheckReport};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_dict<'py>(py: Python<'py>, report: &CheckReport) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?
        .call_method1("loads", (render_json(report),))
}

/// A parsed model file.
#[pyclass(module = "restcheck", frozen)]
struct Model {
    source: String,
    file: String,
    parsed: ParsedModel,
}

#[pymethods]
impl Model {
    #[getter]
    fn name(&self) -> &str {
        &self.parsed.resources.name
    }

    /// Resource definition names in declaration order.
    #[getter]
    fn resources(&self) -> Vec<String> {
        self.parsed
            .resources
            .resources
            .iter()
            .map(|r| r.name.clone())
            .collect()
    }

    /// Names of the states that carry meaning, i.e. all but initial ones.
    #[getter]
    fn states(&self) -> Vec<String> {
        self.parsed
            .behavior
            .as_ref()
            .map(|b| b.concept_states().map(|s| s.name.clone()).collect())
            .unwrap_or_default()
    }

    /// Structural checks only.
    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &pipeline::validate(&self.source, &self.file))
    }

    /// The ontology in OWL 2 functional syntax.
    #[pyo3(signature = (base_iri = DEFAULT_BASE_IRI))]
    fn translate(&self, base_iri: &str) -> PyResult<String> {
        match pipeline::translate(&self.source, &self.file, base_iri) {
            Ok(t) => Ok(serialize(&t.ontology)),
            Err(report) => Err(value_error(render_diagnostics(&report).trim_end())),
        }
    }

    /// Full satisfiability check. With `oracle=k` every verdict is
    /// cross-checked against a finite-model search up to size `k`, and a
    /// disagreement raises `RuntimeError`.
    #[pyo3(signature = (base_iri = DEFAULT_BASE_IRI, oracle = None))]
    fn check<'py>(
        &self,
        py: Python<'py>,
        base_iri: &str,
        oracle: Option<u32>,
    ) -> PyResult<Bound<'py, PyAny>> {
        if oracle.is_some_and(|k| k == 0 || k > MAX_BOUND) {
            return Err(PyValueError::new_err(format!(
                "oracle bound must be between 1 and {MAX_BOUND}"
            )));
        }
        let opts = CheckOptions {
            base_iri: base_iri.to_string(),
            oracle_bound: oracle,
        };
        let outcome = py.detach(|| pipeline::check(&self.source, &self.file, &opts));
        if !outcome.disagreements.is_empty() {
            let lines: Vec<String> = outcome
                .disagreements
                .iter()
                .map(|d| d.to_string())
                .collect();
            return Err(PyRuntimeError::new_err(lines.join("\n")));
        }
        to_dict(py, &outcome.report)
    }

    /// The URI template under which instances of `resource` are reached.
    fn navigation_path(&self, resource: &str) -> PyResult<String> {
        navigation_path(&self.parsed.resources, resource).map_err(value_error)
    }

    /// The model in canonical DSL form.
    fn format(&self) -> String {
        dsl::format_model(&self.parsed.resources, self.parsed.behavior.as_ref())
    }

    fn __repr__(&self) -> String {
        format!("<Model {} from {}>", self.parsed.resources.name, self.file)
    }
}

/// Parses model text; `file` names it in diagnostics.
#[pyfunction]
#[pyo3(signature = (source, file = "<string>"))]
fn parse_model(source: String, file: &str) -> PyResult<Model> {
    match dsl::parse_model(&source, file) {
        Ok(parsed) => Ok(Model {
            source,
            file: file.to_string(),
            parsed,
        }),
        Err(e) => Err(value_error(e)),
    }
}

/// Parses a µOCL invariant and returns its canonical text.
#[pyfunction]
fn parse_ocl(text: &str) -> PyResult<String> {
    mocl::parse_ocl(text)
        .map(|e| e.to_string())
        .map_err(value_error)
}

/// Decides with the tableau reasoner whether the named class of an
/// ontology in functional syntax can have instances.
#[pyfunction]
fn is_satisfiable(py: Python<'_>, ontology: &str, class: &str) -> PyResult<bool> {
    let o = parse_functional_syntax(ontology).map_err(value_error)?;
    let tbox = compile_tbox(&o);
    let class = class.strip_prefix(':').unwrap_or(class);
    if !tbox.classes().iter().any(|c| c == class) {
        return Err(value_error(format!("class ':{class}' is not declared")));
    }
    Ok(py.detach(|| tableau_sat(&tbox, class)).status == SatStatus::Sat)
}

#[pymodule]
pub fn restcheck(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("DEFAULT_BASE_IRI", DEFAULT_BASE_IRI)?;
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(parse_model, m)?)?;
    m.add_function(wrap_pyfunction!(parse_ocl, m)?)?;
    m.add_function(wrap_pyfunction!(is_satisfiable, m)?)?;
    Ok(())
}
