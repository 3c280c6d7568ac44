//! Concept satisfiability for the translated fragment: ALC with unqualified
//! number restrictions, general inclusions and data properties with literal
//! values. No inverse roles, no nominals.

mod oracle;
mod tableau;
mod tbox;

pub use oracle::{bounded_model_search, FiniteModel, OracleError, OracleResult, MAX_BOUND};
pub use tableau::{classify_all, is_satisfiable, SatStatus, SatVerdict};
pub use tbox::{compile_tbox, compile_tbox_with, CompileOptions, TBox};
