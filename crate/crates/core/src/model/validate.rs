//! Structural RESTfulness checks. Violations are returned as data.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::navigation::shortest_label_paths;
use super::{BehavioralModel, ElementRef, ResourceKind, ResourceModel, StateKind};
use crate::diagnostic::{Code, Diagnostic};
use crate::mocl::{self, OclExpr, PathUse};

pub fn validate_resource_model(rm: &ResourceModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    let mut seen = HashSet::new();
    for r in &rm.resources {
        if !seen.insert(r.name.as_str()) {
            out.push(Diagnostic::new(
                Code::DuplicateName,
                Some(ElementRef::Resource(r.name.clone())),
                format!("resource '{}' is defined more than once", r.name),
            ));
        }
    }

    let roots: Vec<_> = rm.resources.iter().filter(|r| r.is_root).collect();
    match roots.len() {
        1 => {}
        0 => out.push(Diagnostic::new(
            Code::BadRoot,
            Some(ElementRef::ResourceModel),
            "resource model has no root resource",
        )),
        _ => {
            for r in &roots[1..] {
                out.push(Diagnostic::new(
                    Code::BadRoot,
                    Some(ElementRef::Resource(r.name.clone())),
                    format!(
                        "resource '{}' is a second root; '{}' is already the root",
                        r.name, roots[0].name
                    ),
                ));
            }
        }
    }

    let mut cyclic = HashSet::new();
    for r in &rm.resources {
        if let Some(p) = &r.parent {
            if rm.resource(p).is_none() {
                out.push(Diagnostic::new(
                    Code::UnresolvedRef,
                    Some(ElementRef::Resource(r.name.clone())),
                    format!("resource '{}' extends undefined resource '{p}'", r.name),
                ));
            } else if in_cycle(&r.name, |n| {
                rm.resource(n).and_then(|x| x.parent.as_deref())
            }) {
                cyclic.insert(r.name.as_str());
                out.push(Diagnostic::new(
                    Code::Cycle,
                    Some(ElementRef::Resource(r.name.clone())),
                    format!("resource '{}' is its own super-resource", r.name),
                ));
            }
        }
    }

    for r in &rm.resources {
        let mut names = HashSet::new();
        for a in &r.attributes {
            if !names.insert(a.name.as_str()) {
                out.push(Diagnostic::new(
                    Code::DuplicateName,
                    Some(ElementRef::attribute(&r.name, &a.name)),
                    format!("attribute '{}' is declared twice in '{}'", a.name, r.name),
                ));
            } else if !cyclic.contains(r.name.as_str()) {
                let inherited = rm
                    .lineage(&r.name)
                    .into_iter()
                    .skip(1)
                    .find(|p| p.attributes.iter().any(|x| x.name == a.name));
                if let Some(p) = inherited {
                    out.push(Diagnostic::new(
                        Code::DuplicateName,
                        Some(ElementRef::attribute(&r.name, &a.name)),
                        format!(
                            "attribute '{}' of '{}' redeclares the one inherited from '{}'",
                            a.name, r.name, p.name
                        ),
                    ));
                }
            }
        }
        let count = rm.effective_attributes(&r.name).len();
        match r.kind {
            ResourceKind::Collection if count > 0 => out.push(Diagnostic::new(
                Code::CollectionHasAttr,
                Some(ElementRef::Resource(r.name.clone())),
                format!("collection resource '{}' must not have attributes", r.name),
            )),
            ResourceKind::Normal if count == 0 => out.push(Diagnostic::new(
                Code::NormalNoAttr,
                Some(ElementRef::Resource(r.name.clone())),
                format!(
                    "normal resource '{}' must have at least one attribute",
                    r.name
                ),
            )),
            _ => {}
        }
    }

    let mut labels: HashMap<&str, usize> = HashMap::new();
    for a in &rm.associations {
        let n = labels.entry(a.label.as_str()).or_default();
        *n += 1;
        if *n == 2 {
            out.push(Diagnostic::new(
                Code::DuplicateLabel,
                Some(ElementRef::Association(a.label.clone())),
                format!("association label '{}' is used more than once", a.label),
            ));
        }
        for end in [&a.source, &a.target] {
            if rm.resource(end).is_none() {
                out.push(Diagnostic::new(
                    Code::UnresolvedRef,
                    Some(ElementRef::Association(a.label.clone())),
                    format!(
                        "association '{}' refers to undefined resource '{end}'",
                        a.label
                    ),
                ));
            }
        }
        if let Some(max) = a.max.bounded() {
            if a.min > max {
                out.push(Diagnostic::new(
                    Code::BadCardinality,
                    Some(ElementRef::Association(a.label.clone())),
                    format!(
                        "association '{}' has min {} greater than max {max}",
                        a.label, a.min
                    ),
                ));
            }
        }
    }

    if let (Some(root), Some(reach)) = (rm.root(), shortest_label_paths(rm)) {
        for r in &rm.resources {
            if !reach.contains_key(&r.name) {
                out.push(Diagnostic::new(
                    Code::Connectivity,
                    Some(ElementRef::Resource(r.name.clone())),
                    format!(
                        "resource '{}' is not reachable from root '{}'",
                        r.name, root.name
                    ),
                ));
            }
        }
    }

    out
}

pub fn validate_behavioral_model(bm: &BehavioralModel, rm: &ResourceModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let bref = Some(ElementRef::BehavioralModel);

    let context_ok = match (rm.resource(&bm.for_resource), rm.root()) {
        (None, _) => {
            out.push(Diagnostic::new(
                Code::UnresolvedRef,
                bref.clone(),
                format!(
                    "behavior '{}' is declared for undefined resource '{}'",
                    bm.name, bm.for_resource
                ),
            ));
            false
        }
        (Some(r), Some(root)) if r.name != root.name => {
            out.push(Diagnostic::new(
                Code::BadRoot,
                bref.clone(),
                format!(
                    "behavior '{}' must describe the root resource '{}', not '{}'",
                    bm.name, root.name, r.name
                ),
            ));
            true
        }
        _ => true,
    };

    let mut seen = HashSet::new();
    for s in &bm.states {
        if !seen.insert(s.name.as_str()) {
            out.push(Diagnostic::new(
                Code::DuplicateName,
                Some(ElementRef::State(s.name.clone())),
                format!("state '{}' is defined more than once", s.name),
            ));
        }
    }

    let mut has_children = HashSet::new();
    for s in &bm.states {
        let here = Some(ElementRef::State(s.name.clone()));
        match &s.parent {
            Some(p) => match bm.state(p) {
                None => out.push(Diagnostic::new(
                    Code::UnresolvedRef,
                    here.clone(),
                    format!("state '{}' is nested in undefined state '{p}'", s.name),
                )),
                Some(ps) => {
                    has_children.insert(p.as_str());
                    if ps.kind != StateKind::Composite {
                        out.push(Diagnostic::new(
                            Code::BadState,
                            here.clone(),
                            format!(
                                "state '{}' is nested in '{p}', which is not a composite state",
                                s.name
                            ),
                        ));
                    } else if in_cycle(&s.name, |n| bm.state(n).and_then(|x| x.parent.as_deref())) {
                        out.push(Diagnostic::new(
                            Code::Cycle,
                            here.clone(),
                            format!("state '{}' is nested in itself", s.name),
                        ));
                    }
                    if matches!(s.kind, StateKind::Initial | StateKind::Final) {
                        out.push(Diagnostic::new(
                            Code::BadState,
                            here.clone(),
                            format!("pseudo and final state '{}' must be top-level", s.name),
                        ));
                    }
                }
            },
            None if s.region > 0 => out.push(Diagnostic::new(
                Code::BadState,
                here.clone(),
                format!(
                    "state '{}' has region {} but no composite parent",
                    s.name, s.region
                ),
            )),
            None => {}
        }
        if matches!(s.kind, StateKind::Initial | StateKind::Final) && s.invariant.is_some() {
            out.push(Diagnostic::new(
                Code::BadState,
                here.clone(),
                format!("state '{}' cannot carry an invariant", s.name),
            ));
        }
    }
    for s in &bm.states {
        if s.kind == StateKind::Composite && !has_children.contains(s.name.as_str()) {
            out.push(Diagnostic::new(
                Code::BadState,
                Some(ElementRef::State(s.name.clone())),
                format!("composite state '{}' has no substates", s.name),
            ));
        }
    }

    // one initial pseudostate per region
    let mut initials: BTreeMap<(Option<&str>, u32), Vec<&str>> = BTreeMap::new();
    for s in bm.states.iter().filter(|s| s.kind == StateKind::Initial) {
        initials
            .entry((s.parent.as_deref(), s.region))
            .or_default()
            .push(&s.name);
    }
    let top = initials.get(&(None, 0)).map(Vec::len).unwrap_or(0);
    if top == 0 {
        out.push(Diagnostic::new(
            Code::BadState,
            bref.clone(),
            format!("behavior '{}' has no initial state", bm.name),
        ));
    }
    for names in initials.values() {
        for extra in names.iter().skip(1) {
            out.push(Diagnostic::new(
                Code::BadState,
                Some(ElementRef::State(extra.to_string())),
                format!(
                    "initial state '{extra}' duplicates '{}' in the same region",
                    names[0]
                ),
            ));
        }
    }

    for (i, t) in bm.transitions.iter().enumerate() {
        let here = Some(ElementRef::Transition(i));
        for (end, role) in [(&t.source, "source"), (&t.target, "target")] {
            match bm.state(end) {
                None => out.push(Diagnostic::new(
                    Code::UnresolvedRef,
                    here.clone(),
                    format!("transition {role} '{end}' is not a state"),
                )),
                Some(s) if role == "target" && s.kind == StateKind::Initial => {
                    out.push(Diagnostic::new(
                        Code::BadState,
                        here.clone(),
                        format!("transition enters initial state '{end}'"),
                    ))
                }
                Some(s) if role == "source" && s.kind == StateKind::Final => {
                    out.push(Diagnostic::new(
                        Code::BadState,
                        here.clone(),
                        format!("transition leaves final state '{end}'"),
                    ))
                }
                _ => {}
            }
        }
        if let Some(r) = &t.target_resource {
            if rm.resource(r).is_none() {
                out.push(Diagnostic::new(
                    Code::UnresolvedRef,
                    here.clone(),
                    format!(
                        "transition {} -> {} targets undefined resource '{r}'",
                        t.source, t.target
                    ),
                ));
            }
        }
    }

    if context_ok {
        for s in &bm.states {
            if let Some(inv) = &s.invariant {
                check_invariant(rm, &bm.for_resource, &s.name, inv, &mut out);
            }
        }
    }

    out
}

fn check_invariant(
    rm: &ResourceModel,
    context: &str,
    state: &str,
    inv: &OclExpr,
    out: &mut Vec<Diagnostic>,
) {
    for leaf in inv.leaves() {
        let here = Some(ElementRef::State(state.to_string()));
        match leaf {
            OclExpr::AttrEq { path, value } => {
                match mocl::resolve_path(rm, context, path, PathUse::Attribute) {
                    Err(e) => out.push(Diagnostic::new(
                        Code::UnresolvedPath,
                        here,
                        format!("invariant of state '{state}': {e}"),
                    )),
                    Ok(resolved) => {
                        let dt = resolved.attribute_datatype().expect("attribute use");
                        if !value.kind.fits(dt) {
                            out.push(Diagnostic::new(
                            Code::TypeMismatch,
                            here,
                            format!("invariant of state '{state}': '{path}' is {dt} but is compared with {} literal {}", value.kind, value),
                        ));
                        }
                    }
                }
            }
            OclExpr::SizeCmp { path, .. } => {
                if let Err(e) = mocl::resolve_path(rm, context, path, PathUse::Association) {
                    out.push(Diagnostic::new(
                        Code::UnresolvedPath,
                        here,
                        format!("invariant of state '{state}': {e}"),
                    ));
                }
            }
            OclExpr::And(_) | OclExpr::Or(_) => {}
        }
    }
}

fn in_cycle<'a>(start: &'a str, parent: impl Fn(&str) -> Option<&'a str>) -> bool {
    let mut seen = HashSet::new();
    let mut cur = Some(start);
    while let Some(n) = cur {
        if !seen.insert(n) {
            return n == start;
        }
        cur = parent(n);
    }
    false
}
