use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use thiserror::Error;

use super::ResourceModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NavigationError {
    #[error("resource '{0}' is not defined")]
    UnknownResource(String),
    #[error("model has no unique root resource")]
    NoRoot,
    #[error("resource '{0}' is not reachable from the root")]
    NoPath(String),
}

/// Shortest label sequence from the root to every reachable resource.
///
/// Associations are directed edges labeled by their name; a resource also
/// reaches its sub-resources without adding a segment, since links to a
/// resource definition can hold instances of its specializations. Among
/// shortest sequences the lexicographically smallest wins.
pub(crate) fn shortest_label_paths(rm: &ResourceModel) -> Option<BTreeMap<String, Vec<String>>> {
    let root = rm.root()?;
    let mut best: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0usize, Vec::<String>::new(), root.name.clone())));
    while let Some(Reverse((len, labels, node))) = heap.pop() {
        if best.contains_key(&node) {
            continue;
        }
        best.insert(node.clone(), labels.clone());
        let lineage: Vec<&str> = rm.lineage(&node).iter().map(|r| r.name.as_str()).collect();
        for a in rm
            .associations
            .iter()
            .filter(|a| lineage.contains(&a.source.as_str()))
        {
            if rm.resource(&a.target).is_some() && !best.contains_key(&a.target) {
                let mut next = labels.clone();
                next.push(a.label.clone());
                heap.push(Reverse((len + 1, next, a.target.clone())));
            }
        }
        for child in rm.children(&node) {
            if !best.contains_key(&child.name) {
                heap.push(Reverse((len, labels.clone(), child.name.clone())));
            }
        }
    }
    Some(best)
}

/// Relative URI template of `target`, e.g. `/{bookingId}/payment`.
pub fn navigation_path(rm: &ResourceModel, target: &str) -> Result<String, NavigationError> {
    if rm.resource(target).is_none() {
        return Err(NavigationError::UnknownResource(target.to_string()));
    }
    let root = rm.root().ok_or(NavigationError::NoRoot)?;
    let paths = shortest_label_paths(rm).ok_or(NavigationError::NoRoot)?;
    let labels = paths
        .get(target)
        .ok_or_else(|| NavigationError::NoPath(target.to_string()))?;
    Ok(format!(
        "/{{{}Id}}/{}",
        lower_first(&root.name),
        labels.join("/")
    ))
}

fn lower_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_ascii_lowercase().to_string() + chars.as_str(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Association, AttributeDef, Datatype, MaxCard, ResourceDef, ResourceKind};

    fn res(name: &str, root: bool) -> ResourceDef {
        ResourceDef {
            name: name.into(),
            kind: ResourceKind::Normal,
            attributes: vec![AttributeDef {
                name: format!("{}_a", name.to_lowercase()),
                datatype: Datatype::String,
            }],
            parent: None,
            is_root: root,
        }
    }

    fn assoc(label: &str, s: &str, t: &str) -> Association {
        Association {
            label: label.into(),
            source: s.into(),
            target: t.into(),
            min: 0,
            max: MaxCard::Unbounded,
        }
    }

    #[test]
    fn tie_break_prefers_smallest_labels() {
        let rm = ResourceModel {
            name: "m".into(),
            resources: vec![
                res("Root", true),
                res("A", false),
                res("B", false),
                res("T", false),
            ],
            associations: vec![
                assoc("zeta", "Root", "A"),
                assoc("alpha", "Root", "B"),
                assoc("x", "A", "T"),
                assoc("y", "B", "T"),
            ],
        };
        assert_eq!(navigation_path(&rm, "T").unwrap(), "/{rootId}/alpha/y");
        assert_eq!(navigation_path(&rm, "Root").unwrap(), "/{rootId}/");
    }

    #[test]
    fn shorter_path_beats_smaller_labels() {
        let rm = ResourceModel {
            name: "m".into(),
            resources: vec![res("Root", true), res("A", false), res("T", false)],
            associations: vec![
                assoc("a", "Root", "A"),
                assoc("b", "A", "T"),
                assoc("z", "Root", "T"),
            ],
        };
        assert_eq!(navigation_path(&rm, "T").unwrap(), "/{rootId}/z");
    }

    #[test]
    fn subresources_share_their_parents_path() {
        let mut sub = res("Sub", false);
        sub.parent = Some("A".into());
        let rm = ResourceModel {
            name: "m".into(),
            resources: vec![res("Root", true), res("A", false), sub],
            associations: vec![assoc("items", "Root", "A")],
        };
        assert_eq!(navigation_path(&rm, "Sub").unwrap(), "/{rootId}/items");
    }

    #[test]
    fn unreachable_and_unknown() {
        let rm = ResourceModel {
            name: "m".into(),
            resources: vec![res("Root", true), res("Orphan", false)],
            associations: vec![],
        };
        assert_eq!(
            navigation_path(&rm, "Orphan"),
            Err(NavigationError::NoPath("Orphan".into()))
        );
        assert_eq!(
            navigation_path(&rm, "Nope"),
            Err(NavigationError::UnknownResource("Nope".into()))
        );
    }
}
