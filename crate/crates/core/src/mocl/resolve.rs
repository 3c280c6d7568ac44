use thiserror::Error;

use super::NavPath;
use crate::model::{Datatype, ResourceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathUse {
    /// The last segment names an attribute.
    Attribute,
    /// Every segment names an association.
    Association,
}

/// One association traversed while walking a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hop {
    pub label: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Terminal {
    /// `owner` is the resource that declares the attribute, which may be a
    /// super-resource of the one reached by navigation.
    Attribute {
        owner: String,
        name: String,
        datatype: Datatype,
    },
    Association {
        label: String,
        source: String,
        target: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedPath {
    pub hops: Vec<Hop>,
    pub terminal: Terminal,
}

impl ResolvedPath {
    pub fn attribute_datatype(&self) -> Option<Datatype> {
        match &self.terminal {
            Terminal::Attribute { datatype, .. } => Some(*datatype),
            Terminal::Association { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot resolve '{segment}': {reason}")]
pub struct PathError {
    pub segment: String,
    pub reason: String,
}

/// Walks `path` from `context` through association labels.
pub fn resolve_path(
    rm: &ResourceModel,
    context: &str,
    path: &NavPath,
    usage: PathUse,
) -> Result<ResolvedPath, PathError> {
    if rm.resource(context).is_none() {
        return Err(PathError {
            segment: context.to_string(),
            reason: "context resource is not defined".into(),
        });
    }
    let (last, prefix) = path.segments.split_last().expect("non-empty path");
    let mut at = context.to_string();
    let mut hops = Vec::new();
    for seg in prefix {
        let a = rm
            .navigable_association(&at, seg)
            .ok_or_else(|| PathError {
                segment: seg.clone(),
                reason: format!("'{at}' has no association named '{seg}'"),
            })?;
        hops.push(Hop {
            label: a.label.clone(),
            from: at.clone(),
            to: a.target.clone(),
        });
        at = a.target.clone();
    }
    let terminal = match usage {
        PathUse::Attribute => {
            let (owner, attr) = rm.find_attribute(&at, last).ok_or_else(|| PathError {
                segment: last.clone(),
                reason: format!("'{at}' has no attribute named '{last}'"),
            })?;
            Terminal::Attribute {
                owner: owner.name.clone(),
                name: attr.name.clone(),
                datatype: attr.datatype,
            }
        }
        PathUse::Association => {
            let a = rm
                .navigable_association(&at, last)
                .ok_or_else(|| PathError {
                    segment: last.clone(),
                    reason: format!("'{at}' has no association named '{last}'"),
                })?;
            Terminal::Association {
                label: a.label.clone(),
                source: a.source.clone(),
                target: a.target.clone(),
            }
        }
    };
    Ok(ResolvedPath { hops, terminal })
}
