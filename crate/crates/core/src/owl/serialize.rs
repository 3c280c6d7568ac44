use std::fmt::Write;

use super::{Axiom, ClassExpr, Ontology, OwlLiteral};

/// Canonical functional syntax: fixed prefixes, one axiom per line, LF
/// endings, single spaces between arguments.
pub fn serialize(o: &Ontology) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Prefix(:=<{}>)", o.base_iri);
    out.push_str("Prefix(xsd:=<http://www.w3.org/2001/XMLSchema#>)\n");
    let _ = writeln!(
        out,
        "Ontology(<{}>",
        o.base_iri.strip_suffix('#').unwrap_or(&o.base_iri)
    );
    for a in &o.axioms {
        write_axiom(&mut out, a);
        out.push('\n');
    }
    out.push_str(")\n");
    out
}

pub(crate) fn write_axiom(out: &mut String, a: &Axiom) {
    match a {
        Axiom::DeclareClass(c) => {
            let _ = write!(out, "Declaration(Class(:{c}))");
        }
        Axiom::DeclareObjectProperty(p) => {
            let _ = write!(out, "Declaration(ObjectProperty(:{p}))");
        }
        Axiom::DeclareDataProperty(p) => {
            let _ = write!(out, "Declaration(DataProperty(:{p}))");
        }
        Axiom::SubClassOf(sub, sup) => {
            out.push_str("SubClassOf(");
            write_class(out, sub);
            out.push(' ');
            write_class(out, sup);
            out.push(')');
        }
        Axiom::EquivalentClasses(a, b) => {
            out.push_str("EquivalentClasses(");
            write_class(out, a);
            out.push(' ');
            write_class(out, b);
            out.push(')');
        }
        Axiom::DisjointClasses(ops) => write_list(out, "DisjointClasses", ops),
        Axiom::ObjectPropertyDomain(p, c) => write_prop_class(out, "ObjectPropertyDomain", p, c),
        Axiom::ObjectPropertyRange(p, c) => write_prop_class(out, "ObjectPropertyRange", p, c),
        Axiom::DataPropertyDomain(p, c) => write_prop_class(out, "DataPropertyDomain", p, c),
        Axiom::DataPropertyRange(p, dt) => {
            let _ = write!(out, "DataPropertyRange(:{p} {})", dt.xsd());
        }
    }
}

fn write_prop_class(out: &mut String, head: &str, p: &str, c: &ClassExpr) {
    let _ = write!(out, "{head}(:{p} ");
    write_class(out, c);
    out.push(')');
}

fn write_list(out: &mut String, head: &str, ops: &[ClassExpr]) {
    out.push_str(head);
    out.push('(');
    for (i, c) in ops.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write_class(out, c);
    }
    out.push(')');
}

pub(crate) fn write_class(out: &mut String, c: &ClassExpr) {
    match c {
        ClassExpr::Named(n) => {
            out.push(':');
            out.push_str(n);
        }
        ClassExpr::IntersectionOf(ops) => write_list(out, "ObjectIntersectionOf", ops),
        ClassExpr::UnionOf(ops) => write_list(out, "ObjectUnionOf", ops),
        ClassExpr::ComplementOf(inner) => {
            out.push_str("ObjectComplementOf(");
            write_class(out, inner);
            out.push(')');
        }
        ClassExpr::SomeValuesFrom(p, filler) => {
            write_prop_class(out, "ObjectSomeValuesFrom", p, filler)
        }
        ClassExpr::MinCardinality(n, p) => {
            let _ = write!(out, "ObjectMinCardinality({n} :{p})");
        }
        ClassExpr::MaxCardinality(n, p) => {
            let _ = write!(out, "ObjectMaxCardinality({n} :{p})");
        }
        ClassExpr::ExactCardinality(n, p) => {
            let _ = write!(out, "ObjectExactCardinality({n} :{p})");
        }
        ClassExpr::DataHasValue(p, lit) => {
            let _ = write!(out, "DataHasValue(:{p} ");
            write_literal(out, lit);
            out.push(')');
        }
        ClassExpr::DataExactCardinality(n, p) => {
            let _ = write!(out, "DataExactCardinality({n} :{p})");
        }
    }
}

fn write_literal(out: &mut String, lit: &OwlLiteral) {
    out.push('"');
    for c in lit.lexical.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out.push_str("\"^^");
    out.push_str(lit.datatype.xsd());
}
