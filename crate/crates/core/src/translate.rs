//! Translation of resource and behavioral models into OWL 2 axioms.
//!
//! Resources become classes, associations object properties and attributes
//! data properties; states become subclasses of the root resource defined by
//! their invariants. The emission order is fixed, so identical input gives
//! byte-identical functional syntax.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::diagnostic::{Code, Diagnostic};
use crate::mocl::{self, CmpOp, LiteralKind, OclExpr, PathError, PathUse, Terminal};
use crate::model::{
    validate_behavioral_model, validate_resource_model, BehavioralModel, Datatype, ElementRef,
    ResourceKind, ResourceModel, StateKind,
};
use crate::owl::{canonical_lexical, Axiom, ClassExpr, Ontology, OwlLiteral};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Class,
    ObjectProperty,
    DataProperty,
}

/// Bidirectional mapping between model elements and IRI fragments. A class
/// and an object property may share a fragment (`rooms` the collection and
/// `rooms` the association); within one entity kind fragments are unique.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IriMap {
    forward: BTreeMap<ElementRef, (EntityKind, String)>,
    backward: BTreeMap<(EntityKind, String), ElementRef>,
}

impl IriMap {
    fn insert(&mut self, element: ElementRef, kind: EntityKind, iri: String) {
        self.backward.insert((kind, iri.clone()), element.clone());
        self.forward.insert(element, (kind, iri));
    }

    fn taken(&self, kind: EntityKind, iri: &str) -> bool {
        self.backward.contains_key(&(kind, iri.to_string()))
    }

    /// First of `base`, `base_2`, `base_3`, ... unused for all of `kinds`.
    fn fresh(&self, kinds: &[EntityKind], base: String) -> String {
        let free = |c: &str| kinds.iter().all(|k| !self.taken(*k, c));
        if free(&base) {
            return base;
        }
        (2..)
            .map(|i| format!("{base}_{i}"))
            .find(|c| free(c))
            .unwrap()
    }

    pub fn iri(&self, element: &ElementRef) -> Option<&str> {
        self.forward.get(element).map(|(_, i)| i.as_str())
    }

    pub fn element(&self, kind: EntityKind, iri: &str) -> Option<&ElementRef> {
        self.backward.get(&(kind, iri.to_string()))
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ElementRef, EntityKind, &str)> {
        self.forward.iter().map(|(e, (k, i))| (e, *k, i.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    pub ontology: Ontology,
    pub iris: IriMap,
    /// Non-structural findings made while translating, such as `NEGATIVE_BOUND`.
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("PRECONDITION_VIOLATED: the model has {} validation error(s)", .0.len())]
    PreconditionViolated(Vec<Diagnostic>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OclTranslateError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("NEGATIVE_BOUND: '{0}->size() < 0' can never hold")]
    NegativeBound(String),
    #[error("'{path}' has no {datatype} value {value}")]
    BadLiteral {
        path: String,
        datatype: Datatype,
        value: String,
    },
}

/// Translates a valid resource model.
pub fn translate_resource_model(
    rm: &ResourceModel,
    base_iri: &str,
) -> Result<Translation, TranslateError> {
    let diags = validate_resource_model(rm);
    if !diags.is_empty() {
        return Err(TranslateError::PreconditionViolated(diags));
    }
    let mut o = Ontology::new(base_iri);
    let mut iris = IriMap::default();

    for r in &rm.resources {
        iris.insert(
            ElementRef::Resource(r.name.clone()),
            EntityKind::Class,
            r.name.clone(),
        );
        o.push(Axiom::DeclareClass(r.name.clone()));
    }
    for r in &rm.resources {
        if let Some(p) = &r.parent {
            o.push(Axiom::SubClassOf(
                ClassExpr::named(&r.name),
                ClassExpr::named(p),
            ));
        }
    }
    let top: Vec<&str> = rm
        .resources
        .iter()
        .filter(|r| r.parent.is_none())
        .map(|r| r.name.as_str())
        .collect();
    push_disjoint(&mut o, &top);
    for r in &rm.resources {
        let children: Vec<&str> = rm.children(&r.name).map(|c| c.name.as_str()).collect();
        push_disjoint(&mut o, &children);
    }

    for a in &rm.associations {
        iris.insert(
            ElementRef::Association(a.label.clone()),
            EntityKind::ObjectProperty,
            a.label.clone(),
        );
    }
    for r in rm
        .resources
        .iter()
        .filter(|r| r.kind == ResourceKind::Normal)
    {
        for att in &r.attributes {
            let shared = rm
                .resources
                .iter()
                .any(|o| o.name != r.name && o.attributes.iter().any(|x| x.name == att.name))
                || rm.association(&att.name).is_some();
            let base = if shared {
                format!("{}_{}", r.name, att.name)
            } else {
                att.name.clone()
            };
            let iri = iris.fresh(
                &[EntityKind::DataProperty, EntityKind::ObjectProperty],
                base,
            );
            iris.insert(
                ElementRef::attribute(&r.name, &att.name),
                EntityKind::DataProperty,
                iri.clone(),
            );
            o.push(Axiom::DeclareDataProperty(iri.clone()));
            o.push(Axiom::SubClassOf(
                ClassExpr::named(&r.name),
                ClassExpr::DataExactCardinality(1, iri.clone()),
            ));
            o.push(Axiom::DataPropertyDomain(
                iri.clone(),
                ClassExpr::named(&r.name),
            ));
            o.push(Axiom::DataPropertyRange(iri, att.datatype));
        }
    }
    for a in &rm.associations {
        let p = a.label.clone();
        o.push(Axiom::DeclareObjectProperty(p.clone()));
        o.push(Axiom::ObjectPropertyDomain(
            p.clone(),
            ClassExpr::named(&a.source),
        ));
        o.push(Axiom::ObjectPropertyRange(
            p.clone(),
            ClassExpr::named(&a.target),
        ));
        if a.min > 0 {
            o.push(Axiom::SubClassOf(
                ClassExpr::named(&a.source),
                ClassExpr::MinCardinality(a.min, p.clone()),
            ));
        }
        if let Some(max) = a.max.bounded() {
            o.push(Axiom::SubClassOf(
                ClassExpr::named(&a.source),
                ClassExpr::MaxCardinality(max, p),
            ));
        }
    }

    Ok(Translation {
        ontology: o,
        iris,
        diagnostics: Vec::new(),
    })
}

/// Appends the behavioral model's axioms to `base`, the translation of `rm`.
pub fn translate_behavioral_model(
    bm: &BehavioralModel,
    rm: &ResourceModel,
    base: Translation,
) -> Result<Translation, TranslateError> {
    let diags = validate_behavioral_model(bm, rm);
    if !diags.is_empty() {
        return Err(TranslateError::PreconditionViolated(diags));
    }
    let Translation {
        ontology: mut o,
        mut iris,
        mut diagnostics,
    } = base;
    let root = bm.for_resource.as_str();

    let mut class_of = BTreeMap::new();
    for s in bm.concept_states() {
        let iri = iris.fresh(&[EntityKind::Class], format!("State_{}", s.name));
        iris.insert(
            ElementRef::State(s.name.clone()),
            EntityKind::Class,
            iri.clone(),
        );
        o.push(Axiom::DeclareClass(iri.clone()));
        o.push(Axiom::SubClassOf(
            ClassExpr::named(&iri),
            ClassExpr::named(root),
        ));
        class_of.insert(s.name.as_str(), iri);
    }
    let nested = |k: StateKind| matches!(k, StateKind::Simple | StateKind::Composite);
    for s in bm.states.iter().filter(|s| nested(s.kind)) {
        if let Some(p) = &s.parent {
            o.push(Axiom::SubClassOf(
                ClassExpr::named(&class_of[s.name.as_str()]),
                ClassExpr::named(&class_of[p.as_str()]),
            ));
        }
    }

    let group = |parent: Option<&str>, region: u32| -> Vec<&str> {
        bm.states
            .iter()
            .filter(|s| {
                nested(s.kind)
                    && s.parent.as_deref() == parent
                    && (parent.is_none() || s.region == region)
            })
            .map(|s| class_of[s.name.as_str()].as_str())
            .collect()
    };
    push_disjoint(&mut o, &group(None, 0));
    for p in bm.states.iter().filter(|s| s.kind == StateKind::Composite) {
        let regions: BTreeSet<u32> = bm
            .states
            .iter()
            .filter(|s| s.parent.as_deref() == Some(p.name.as_str()))
            .map(|s| s.region)
            .collect();
        for r in regions {
            push_disjoint(&mut o, &group(Some(&p.name), r));
        }
    }

    for s in bm.states.iter().filter(|s| nested(s.kind)) {
        let Some(inv) = &s.invariant else { continue };
        let class = ClassExpr::named(&class_of[s.name.as_str()]);
        let def = match translate_ocl(inv, rm, root, &iris) {
            Ok(c) => c,
            Err(OclTranslateError::NegativeBound(path)) => {
                let label = path.rsplit('.').next().unwrap_or(&path).to_string();
                let prop = iris
                    .iri(&ElementRef::Association(label.clone()))
                    .unwrap_or(&label)
                    .to_string();
                diagnostics.push(Diagnostic::new(
                    Code::NegativeBound,
                    Some(ElementRef::State(s.name.clone())),
                    format!("invariant of state '{}' requires '{path}->size() < 0', which can never hold", s.name),
                ));
                ClassExpr::IntersectionOf(vec![
                    ClassExpr::MinCardinality(1, prop.clone()),
                    ClassExpr::MaxCardinality(0, prop),
                ])
            }
            // validation resolved every path and literal already
            Err(e) => unreachable!("validated invariant failed to translate: {e}"),
        };
        o.push(Axiom::EquivalentClasses(class, def));
    }

    Ok(Translation {
        ontology: o,
        iris,
        diagnostics,
    })
}

/// Translates both models in order.
pub fn translate_models(
    rm: &ResourceModel,
    bm: Option<&BehavioralModel>,
    base_iri: &str,
) -> Result<Translation, TranslateError> {
    let t = translate_resource_model(rm, base_iri)?;
    match bm {
        Some(bm) => translate_behavioral_model(bm, rm, t),
        None => Ok(t),
    }
}

/// Class expression for invariant `e` evaluated on instances of `context`.
pub fn translate_ocl(
    e: &OclExpr,
    rm: &ResourceModel,
    context: &str,
    iris: &IriMap,
) -> Result<ClassExpr, OclTranslateError> {
    match e {
        OclExpr::And(ops) => Ok(ClassExpr::IntersectionOf(
            ops.iter()
                .map(|o| translate_ocl(o, rm, context, iris))
                .collect::<Result<_, _>>()?,
        )),
        OclExpr::Or(ops) => Ok(ClassExpr::UnionOf(
            ops.iter()
                .map(|o| translate_ocl(o, rm, context, iris))
                .collect::<Result<_, _>>()?,
        )),
        OclExpr::AttrEq { path, value } => {
            let resolved = mocl::resolve_path(rm, context, path, PathUse::Attribute)?;
            let Terminal::Attribute {
                owner,
                name,
                datatype,
            } = &resolved.terminal
            else {
                unreachable!()
            };
            let bad = || OclTranslateError::BadLiteral {
                path: path.to_string(),
                datatype: *datatype,
                value: value.to_string(),
            };
            if !value.kind.fits(*datatype) {
                return Err(bad());
            }
            let lexical = match value.kind {
                LiteralKind::Boolean => value.lexical.to_ascii_lowercase(),
                _ => value.lexical.clone(),
            };
            let lexical = canonical_lexical(*datatype, &lexical).ok_or_else(bad)?;
            let att = prop_iri(iris, ElementRef::attribute(owner, name));
            let inner = ClassExpr::DataHasValue(att, OwlLiteral::new(lexical, *datatype));
            Ok(wrap_hops(iris, &resolved.hops, inner))
        }
        OclExpr::SizeCmp { path, op, bound } => {
            let resolved = mocl::resolve_path(rm, context, path, PathUse::Association)?;
            let Terminal::Association { label, .. } = &resolved.terminal else {
                unreachable!()
            };
            let p = prop_iri(iris, ElementRef::Association(label.clone()));
            let n = *bound;
            let card = match op {
                CmpOp::Eq => ClassExpr::ExactCardinality(n, p),
                CmpOp::Ge => ClassExpr::MinCardinality(n, p),
                CmpOp::Gt => ClassExpr::MinCardinality(n + 1, p),
                CmpOp::Le => ClassExpr::MaxCardinality(n, p),
                CmpOp::Lt if n == 0 => {
                    return Err(OclTranslateError::NegativeBound(path.to_string()))
                }
                CmpOp::Lt => ClassExpr::MaxCardinality(n - 1, p),
            };
            Ok(wrap_hops(iris, &resolved.hops, card))
        }
    }
}

fn prop_iri(iris: &IriMap, e: ElementRef) -> String {
    match iris.iri(&e) {
        Some(i) => i.to_string(),
        None => e.name(),
    }
}

fn wrap_hops(iris: &IriMap, hops: &[mocl::Hop], inner: ClassExpr) -> ClassExpr {
    hops.iter().rev().fold(inner, |acc, h| {
        ClassExpr::some(
            prop_iri(iris, ElementRef::Association(h.label.clone())),
            acc,
        )
    })
}

fn push_disjoint(o: &mut Ontology, names: &[&str]) {
    if names.len() >= 2 {
        o.push(Axiom::DisjointClasses(
            names.iter().map(|n| ClassExpr::named(*n)).collect(),
        ));
    }
}
