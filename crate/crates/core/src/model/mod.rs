//! Resource and behavioral models of a REST interface.
//!
//! A [`ResourceModel`] describes resource definitions, their attributes,
//! labeled associations and the super/sub-resource hierarchy. A
//! [`BehavioralModel`] is a protocol state machine over the root resource whose
//! states are characterized by µOCL invariants.
//!
//! All values are plain data: they compare structurally and carry no source
//! positions. Positions live in [`SourceMap`](crate::dsl::SourceMap).

mod navigation;
mod validate;

use std::collections::HashSet;
use std::fmt;

pub use navigation::{navigation_path, NavigationError};
pub use validate::{validate_behavioral_model, validate_resource_model};

use crate::mocl::OclExpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Datatype {
    String,
    Boolean,
    Integer,
    Decimal,
}

impl Datatype {
    pub const ALL: [Datatype; 4] = [
        Datatype::String,
        Datatype::Boolean,
        Datatype::Integer,
        Datatype::Decimal,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Datatype::String => "string",
            Datatype::Boolean => "boolean",
            Datatype::Integer => "integer",
            Datatype::Decimal => "decimal",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.keyword() == s)
    }

    /// Prefixed XML Schema name, e.g. `xsd:boolean`.
    pub fn xsd(self) -> &'static str {
        match self {
            Datatype::String => "xsd:string",
            Datatype::Boolean => "xsd:boolean",
            Datatype::Integer => "xsd:integer",
            Datatype::Decimal => "xsd:decimal",
        }
    }

    pub fn from_xsd(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.xsd() == s)
    }
}

impl fmt::Display for Datatype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResourceKind {
    Collection,
    Normal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeDef {
    pub name: String,
    pub datatype: Datatype,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceDef {
    pub name: String,
    pub kind: ResourceKind,
    pub attributes: Vec<AttributeDef>,
    /// Super-resource this definition specializes.
    pub parent: Option<String>,
    pub is_root: bool,
}

/// Upper bound of an association multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaxCard {
    Bounded(u32),
    Unbounded,
}

impl MaxCard {
    pub fn bounded(self) -> Option<u32> {
        match self {
            MaxCard::Bounded(n) => Some(n),
            MaxCard::Unbounded => None,
        }
    }
}

impl fmt::Display for MaxCard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxCard::Bounded(n) => write!(f, "{n}"),
            MaxCard::Unbounded => f.write_str("*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Association {
    pub label: String,
    pub source: String,
    pub target: String,
    pub min: u32,
    pub max: MaxCard,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResourceModel {
    pub name: String,
    pub resources: Vec<ResourceDef>,
    pub associations: Vec<Association>,
}

impl ResourceModel {
    pub fn resource(&self, name: &str) -> Option<&ResourceDef> {
        self.resources.iter().find(|r| r.name == name)
    }

    /// The unique root, if the model has exactly one.
    pub fn root(&self) -> Option<&ResourceDef> {
        let mut roots = self.resources.iter().filter(|r| r.is_root);
        match (roots.next(), roots.next()) {
            (Some(r), None) => Some(r),
            _ => None,
        }
    }

    /// `name` followed by its super-resources, nearest first. Stops on cycles
    /// and unknown parents.
    pub fn lineage(&self, name: &str) -> Vec<&ResourceDef> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut cur = self.resource(name);
        while let Some(r) = cur {
            if !seen.insert(r.name.as_str()) {
                break;
            }
            out.push(r);
            cur = r.parent.as_deref().and_then(|p| self.resource(p));
        }
        out
    }

    /// Own and inherited attributes, own first.
    pub fn effective_attributes(&self, name: &str) -> Vec<(&ResourceDef, &AttributeDef)> {
        self.lineage(name)
            .into_iter()
            .flat_map(|r| r.attributes.iter().map(move |a| (r, a)))
            .collect()
    }

    pub fn find_attribute(
        &self,
        resource: &str,
        attr: &str,
    ) -> Option<(&ResourceDef, &AttributeDef)> {
        self.effective_attributes(resource)
            .into_iter()
            .find(|(_, a)| a.name == attr)
    }

    pub fn association(&self, label: &str) -> Option<&Association> {
        self.associations.iter().find(|a| a.label == label)
    }

    /// Association labeled `label` navigable from `resource`, either declared on
    /// it or inherited from a super-resource.
    pub fn navigable_association(&self, resource: &str, label: &str) -> Option<&Association> {
        let lineage: Vec<&str> = self
            .lineage(resource)
            .iter()
            .map(|r| r.name.as_str())
            .collect();
        self.associations
            .iter()
            .find(|a| a.label == label && lineage.contains(&a.source.as_str()))
    }

    /// Direct sub-resources of `name`, in declaration order.
    pub fn children(&self, name: &str) -> impl Iterator<Item = &ResourceDef> {
        let name = name.to_string();
        self.resources
            .iter()
            .filter(move |r| r.parent.as_deref() == Some(name.as_str()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    Simple,
    Composite,
    Initial,
    Final,
}

impl StateKind {
    pub fn is_pseudo(self) -> bool {
        self == StateKind::Initial
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub name: String,
    pub kind: StateKind,
    pub parent: Option<String>,
    /// Region index inside `parent`; 0 unless the parent has orthogonal regions.
    pub region: u32,
    pub invariant: Option<OclExpr>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trigger {
    Put,
    Post,
    Delete,
}

impl Trigger {
    pub fn as_str(self) -> &'static str {
        match self {
            Trigger::Put => "PUT",
            Trigger::Post => "POST",
            Trigger::Delete => "DELETE",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "PUT" => Some(Trigger::Put),
            "POST" => Some(Trigger::Post),
            "DELETE" => Some(Trigger::Delete),
            _ => None,
        }
    }
}

impl fmt::Display for Trigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A protocol transition. Guard and postcondition are kept verbatim and never
/// interpreted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub source: String,
    pub target: String,
    pub trigger: Trigger,
    pub target_resource: Option<String>,
    pub guard: Option<String>,
    pub post: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BehavioralModel {
    pub name: String,
    pub for_resource: String,
    pub states: Vec<State>,
    pub transitions: Vec<Transition>,
}

impl BehavioralModel {
    pub fn state(&self, name: &str) -> Option<&State> {
        self.states.iter().find(|s| s.name == name)
    }

    /// States that become OWL classes (everything but the initial pseudostate).
    pub fn concept_states(&self) -> impl Iterator<Item = &State> {
        self.states.iter().filter(|s| !s.kind.is_pseudo())
    }
}

/// Reference to a model element, used to map diagnostics and verdicts back to
/// source locations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementRef {
    ResourceModel,
    BehavioralModel,
    Resource(String),
    Attribute { owner: String, name: String },
    Association(String),
    State(String),
    Transition(usize),
}

impl ElementRef {
    pub fn attribute(owner: &str, name: &str) -> Self {
        ElementRef::Attribute {
            owner: owner.to_string(),
            name: name.to_string(),
        }
    }

    /// Short display name of the element.
    pub fn name(&self) -> String {
        match self {
            ElementRef::ResourceModel => "resources".into(),
            ElementRef::BehavioralModel => "behavior".into(),
            ElementRef::Resource(n) | ElementRef::Association(n) | ElementRef::State(n) => {
                n.clone()
            }
            ElementRef::Attribute { owner, name } => format!("{owner}.{name}"),
            ElementRef::Transition(i) => format!("transition #{}", i + 1),
        }
    }
}
