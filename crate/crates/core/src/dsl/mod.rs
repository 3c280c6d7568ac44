//! Textual model DSL.
//!
//! ```text
//! resources HotelBooking {
//!   root resource Booking { attr status: string }
//!   resource Payment { attr waiting: boolean }
//!   association payment: Booking -> Payment [0..1]
//! }
//! behavior Lifecycle for Booking {
//!   initial start
//!   state paying { inv: self.payment->size() = 1 }
//!   transition start -> paying on PUT Payment
//! }
//! ```

mod error;
mod format;
mod parser;

use std::collections::BTreeMap;

pub use error::{ModelError, ParseError, Unbound};
pub use format::format_model;
pub use parser::{parse_model, parse_model_file};

use crate::model::{BehavioralModel, ElementRef, ResourceModel};
use crate::span::SourceSpan;

/// Source positions of parsed model elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    pub file: String,
    spans: BTreeMap<ElementRef, SourceSpan>,
}

impl SourceMap {
    pub fn new(file: impl Into<String>) -> Self {
        SourceMap {
            file: file.into(),
            spans: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, element: ElementRef, span: SourceSpan) {
        self.spans.entry(element).or_insert(span);
    }

    pub fn get(&self, element: &ElementRef) -> Option<&SourceSpan> {
        self.spans.get(element)
    }
}

/// Result of parsing a model file: both models plus element positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedModel {
    pub resources: ResourceModel,
    pub behavior: Option<BehavioralModel>,
    pub spans: SourceMap,
}
