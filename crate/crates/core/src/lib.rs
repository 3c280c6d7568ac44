//! Consistency checking for REST interface models.
//!
//! A model file holds a resource model (resource definitions, attributes and
//! labeled associations) and optionally a behavioral model (a protocol state
//! machine whose states carry µOCL invariants). The pipeline parses the file,
//! checks the structural RESTfulness rules, translates both models into an
//! OWL 2 ontology and decides, with an embedded tableau reasoner, whether
//! every resource definition and state can actually be instantiated.
//!
//! ```
//! use restcheck_core::pipeline::{check, CheckOptions};
//!
//! let src = r#"
//! resources Shop {
//!   root resource Order { attr paid: boolean }
//! }
//! "#;
//! let outcome = check(src, "shop.model", &CheckOptions::default());
//! assert_eq!(outcome.report.overall, restcheck_core::report::Overall::Consistent);
//! ```

pub mod cli;
pub mod diagnostic;
pub mod dsl;
mod lex;
pub mod mocl;
pub mod model;
pub mod owl;
pub mod pipeline;
pub mod reasoner;
pub mod report;
pub mod span;
pub mod translate;
