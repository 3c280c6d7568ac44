//! OWL 2 axioms in the fragment produced by the translator, with a canonical
//! functional-syntax serializer and a parser for the same fragment.
//!
//! Entities are named by their fragment relative to the ontology base, so
//! `:Booking` is held as `"Booking"`.

mod literal;
mod parse;
mod serialize;

pub use literal::canonical_lexical;
pub use parse::{parse_functional_syntax, OwlParseError};
pub use serialize::serialize;

use crate::model::Datatype;

pub const DEFAULT_BASE_IRI: &str = "http://restcheck.example/models#";

/// Typed literal. `lexical` is kept exactly as written.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OwlLiteral {
    pub lexical: String,
    pub datatype: Datatype,
}

impl OwlLiteral {
    pub fn new(lexical: impl Into<String>, datatype: Datatype) -> Self {
        OwlLiteral {
            lexical: lexical.into(),
            datatype,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassExpr {
    Named(String),
    /// At least two operands.
    IntersectionOf(Vec<ClassExpr>),
    /// At least two operands.
    UnionOf(Vec<ClassExpr>),
    ComplementOf(Box<ClassExpr>),
    SomeValuesFrom(String, Box<ClassExpr>),
    MinCardinality(u32, String),
    MaxCardinality(u32, String),
    ExactCardinality(u32, String),
    DataHasValue(String, OwlLiteral),
    DataExactCardinality(u32, String),
}

impl ClassExpr {
    pub fn named(iri: impl Into<String>) -> Self {
        ClassExpr::Named(iri.into())
    }

    pub fn some(prop: impl Into<String>, filler: ClassExpr) -> Self {
        ClassExpr::SomeValuesFrom(prop.into(), Box::new(filler))
    }

    pub fn complement(c: ClassExpr) -> Self {
        ClassExpr::ComplementOf(Box::new(c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Axiom {
    DeclareClass(String),
    DeclareObjectProperty(String),
    DeclareDataProperty(String),
    SubClassOf(ClassExpr, ClassExpr),
    EquivalentClasses(ClassExpr, ClassExpr),
    /// At least two operands.
    DisjointClasses(Vec<ClassExpr>),
    ObjectPropertyDomain(String, ClassExpr),
    ObjectPropertyRange(String, ClassExpr),
    DataPropertyDomain(String, ClassExpr),
    DataPropertyRange(String, Datatype),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ontology {
    pub base_iri: String,
    pub axioms: Vec<Axiom>,
}

impl Ontology {
    pub fn new(base_iri: impl Into<String>) -> Self {
        Ontology {
            base_iri: base_iri.into(),
            axioms: Vec::new(),
        }
    }

    /// Declared classes in declaration order.
    pub fn classes(&self) -> impl Iterator<Item = &str> {
        self.axioms.iter().filter_map(|a| match a {
            Axiom::DeclareClass(c) => Some(c.as_str()),
            _ => None,
        })
    }

    pub fn push(&mut self, axiom: Axiom) {
        self.axioms.push(axiom);
    }
}
