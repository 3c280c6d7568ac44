use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::tbox::{CId, Concept, TBox, BOTTOM, TOP};
use crate::model::Datatype;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SatStatus {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatVerdict {
    pub iri: String,
    pub status: SatStatus,
    /// Nodes of the completed clash-free tableau; `None` when unsatisfiable.
    pub witness_size: Option<usize>,
}

/// Decides whether `class` can have instances in some model of `t`.
pub fn is_satisfiable(t: &TBox, class: &str) -> SatVerdict {
    let mut root: Vec<CId> = t.global.clone();
    if let Some(a) = t.atom_id(class) {
        root.push(
            t.lookup(&Concept::Atom(a))
                .expect("atoms are interned with their concept"),
        );
    }
    let witness = Tableau { t }.run(&root);
    SatVerdict {
        iri: class.to_string(),
        status: if witness.is_some() {
            SatStatus::Sat
        } else {
            SatStatus::Unsat
        },
        witness_size: witness,
    }
}

/// One verdict per declared class, in declaration order.
pub fn classify_all(t: &TBox) -> Vec<SatVerdict> {
    let classes = t.classes();
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(classes.len().max(1));
    if workers <= 1 || classes.len() < 4 {
        return classes.iter().map(|c| is_satisfiable(t, c)).collect();
    }
    let chunk = classes.len().div_ceil(workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = classes
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|c| is_satisfiable(t, c))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("classification worker panicked"))
            .collect()
    })
}

/// Branch points a fact depends on.
type Deps = BTreeSet<u32>;

fn union(a: &Deps, b: &Deps) -> Deps {
    a.union(b).copied().collect()
}

#[derive(Debug, Clone)]
struct Node {
    label: BTreeMap<CId, Deps>,
    parent: Option<usize>,
    /// Roles of the edge from the parent.
    in_roles: BTreeSet<u32>,
    /// Why the edge from the parent exists.
    edge: Deps,
    children: Vec<usize>,
    distinct: BTreeMap<usize, Deps>,
    /// At-least restrictions already expanded here.
    applied: BTreeSet<CId>,
    alive: bool,
}

impl Node {
    fn dead() -> Self {
        Node {
            label: BTreeMap::new(),
            parent: None,
            in_roles: BTreeSet::new(),
            edge: Deps::new(),
            children: Vec::new(),
            distinct: BTreeMap::new(),
            applied: BTreeSet::new(),
            alive: false,
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Graph {
    nodes: Vec<Node>,
}

enum Choice {
    Add(usize, CId),
    Merge { keep: usize, drop: usize },
}

enum Step {
    Clash(Deps),
    Complete,
    Branch(Vec<Choice>, Deps),
}

struct Tableau<'t> {
    t: &'t TBox,
}

impl Tableau<'_> {
    fn run(&self, root: &[CId]) -> Option<usize> {
        let mut g = Graph::default();
        let none = Deps::new();
        let concepts: Vec<(CId, Deps)> = root.iter().map(|c| (*c, none.clone())).collect();
        self.new_node(&mut g, None, None, &none, &concepts);
        self.search(g, 0).ok()
    }

    /// Depth-first search with dependency-directed backjumping: a branch
    /// whose failure does not involve the current choice point is not
    /// retried with the remaining options.
    fn search(&self, mut g: Graph, level: u32) -> Result<usize, Deps> {
        match self.expand(&mut g) {
            Step::Clash(d) => Err(d),
            Step::Complete => Ok(g.nodes.iter().filter(|n| n.alive).count()),
            Step::Branch(choices, why) => {
                let mut tagged = why.clone();
                tagged.insert(level);
                let mut failed = why;
                for c in choices {
                    let mut h = g.clone();
                    self.apply(&mut h, c, &tagged);
                    match self.search(h, level + 1) {
                        Ok(n) => return Ok(n),
                        Err(d) if !d.contains(&level) => return Err(d),
                        Err(d) => failed.extend(d.into_iter().filter(|l| *l != level)),
                    }
                }
                Err(failed)
            }
        }
    }

    fn new_node(
        &self,
        g: &mut Graph,
        parent: Option<usize>,
        role: Option<u32>,
        edge: &Deps,
        concepts: &[(CId, Deps)],
    ) -> usize {
        let id = g.nodes.len();
        g.nodes.push(Node {
            in_roles: role.into_iter().collect(),
            parent,
            edge: edge.clone(),
            alive: true,
            ..Node::dead()
        });
        if let Some(p) = parent {
            g.nodes[p].children.push(id);
        }
        for (c, d) in concepts {
            self.add(g, id, *c, d);
        }
        for &c in &self.t.global {
            self.add(g, id, c, &Deps::new());
        }
        id
    }

    fn apply(&self, g: &mut Graph, c: Choice, deps: &Deps) {
        match c {
            Choice::Add(x, c) => {
                self.add(g, x, c, deps);
            }
            Choice::Merge { keep, drop } => merge(g, keep, drop, deps),
        }
    }

    /// Adds `c` and whatever it unfolds to. Returns whether the label grew.
    fn add(&self, g: &mut Graph, x: usize, c: CId, deps: &Deps) -> bool {
        let mut work = vec![c];
        let mut grew = false;
        let label = &mut g.nodes[x].label;
        while let Some(c) = work.pop() {
            if c == TOP || label.contains_key(&c) {
                continue;
            }
            label.insert(c, deps.clone());
            grew = true;
            match self.t.concept(c) {
                Concept::And(ops) => work.extend(ops.iter().copied()),
                Concept::Atom(a) => work.extend(self.t.unfold[*a as usize].iter().copied()),
                _ => {}
            }
        }
        grew
    }

    fn deps_of<'l>(&self, label: &'l BTreeMap<CId, Deps>, c: &Concept) -> Option<&'l Deps> {
        self.t.lookup(c).and_then(|id| label.get(&id))
    }

    /// If adding `c` to `label` clashes immediately, the dependencies of the
    /// entries it clashes with.
    fn conflicts(&self, label: &BTreeMap<CId, Deps>, c: CId) -> Option<Deps> {
        let find = |pred: &dyn Fn(&Concept) -> bool| {
            label
                .iter()
                .find(|(o, _)| pred(self.t.concept(**o)))
                .map(|(_, d)| d.clone())
        };
        match self.t.concept(c) {
            Concept::Bottom => Some(Deps::new()),
            Concept::Atom(a) => self.deps_of(label, &Concept::NotAtom(*a)).cloned(),
            Concept::NotAtom(a) => self.deps_of(label, &Concept::Atom(*a)).cloned(),
            Concept::HasValue(q, v) => self.deps_of(label, &Concept::NotValue(*q, *v)).cloned(),
            Concept::NotValue(q, v) => self.deps_of(label, &Concept::HasValue(*q, *v)).cloned(),
            Concept::AtMost(m, r) => find(&|o| match o {
                Concept::AtLeast(n, s) => s == r && n > m,
                Concept::Exists(s, _) => s == r && *m == 0,
                _ => false,
            }),
            Concept::AtLeast(n, r) => {
                find(&|o| matches!(o, Concept::AtMost(m, s) if s == r && m < n))
            }
            Concept::Exists(r, _) => self.deps_of(label, &Concept::AtMost(0, *r)).cloned(),
            _ => None,
        }
    }

    fn local_clash(&self, label: &BTreeMap<CId, Deps>) -> Option<Deps> {
        if let Some(d) = label.get(&BOTTOM) {
            return Some(d.clone());
        }
        label
            .iter()
            .find_map(|(c, d)| self.conflicts(label, *c).map(|e| union(d, &e)))
    }

    /// Checks the data constraints of one node; on success returns the
    /// domain concepts implied by the values it must carry.
    fn data_check(&self, label: &BTreeMap<CId, Deps>) -> Result<Vec<(CId, Deps)>, Deps> {
        let mut props: BTreeMap<u32, Deps> = BTreeMap::new();
        for (c, d) in label {
            match self.t.concept(*c) {
                Concept::HasValue(q, _)
                | Concept::NotValue(q, _)
                | Concept::DataAtLeast(_, q)
                | Concept::DataAtMost(_, q) => {
                    props.entry(*q).or_default().extend(d.iter().copied());
                }
                _ => {}
            }
        }
        let mut implied = Vec::new();
        for (q, why) in props {
            let mut pos = BTreeSet::new();
            let mut neg = BTreeSet::new();
            let (mut lo, mut hi) = (0u64, u64::MAX);
            for c in label.keys() {
                match self.t.concept(*c) {
                    Concept::HasValue(p, v) if *p == q => {
                        pos.insert(*v);
                    }
                    Concept::NotValue(p, v) if *p == q => {
                        neg.insert(*v);
                    }
                    Concept::DataAtLeast(n, p) if *p == q => lo = lo.max(*n as u64),
                    Concept::DataAtMost(n, p) if *p == q => hi = hi.min(*n as u64),
                    _ => {}
                }
            }
            let range = &self.t.data_range[q as usize];
            let allowed = |dt: Datatype| range.as_ref().is_none_or(|r| r.contains(&dt));
            if pos
                .iter()
                .any(|v| !allowed(self.t.values[*v as usize].0) || neg.contains(v))
            {
                return Err(why);
            }
            let k = lo.max(pos.len() as u64);
            if k > hi {
                return Err(why);
            }
            let need = k - pos.len() as u64;
            if need > 0 {
                let mut available = 0u64;
                for dt in Datatype::ALL.into_iter().filter(|d| allowed(*d)) {
                    if dt == Datatype::Boolean {
                        let used = pos
                            .iter()
                            .chain(&neg)
                            .filter(|v| self.t.values[**v as usize].0 == dt)
                            .count();
                        available = available.saturating_add(2 - used.min(2) as u64);
                    } else {
                        available = u64::MAX;
                    }
                }
                if available < need {
                    return Err(why);
                }
            }
            if k > 0 {
                implied.extend(
                    self.t.data_domain[q as usize]
                        .iter()
                        .map(|c| (*c, why.clone())),
                );
            }
        }
        Ok(implied)
    }

    fn successors<'g>(
        &self,
        g: &'g Graph,
        x: usize,
        role: u32,
    ) -> impl Iterator<Item = usize> + 'g {
        g.nodes[x]
            .children
            .iter()
            .copied()
            .filter(move |y| g.nodes[*y].alive && g.nodes[*y].in_roles.contains(&role))
    }

    /// Options of an unsatisfied disjunction that do not clash outright,
    /// with the dependencies of the ones that do.
    fn viable(&self, label: &BTreeMap<CId, Deps>, ops: &[CId], why: &Deps) -> (Vec<CId>, Deps) {
        let mut why = why.clone();
        let mut viable = Vec::new();
        for o in ops {
            match self.conflicts(label, *o) {
                Some(d) => why.extend(d),
                None => viable.push(*o),
            }
        }
        (viable, why)
    }

    /// Deterministic rules on every node until nothing changes.
    fn saturate(&self, g: &mut Graph) -> Result<(), Deps> {
        loop {
            let mut changed = false;
            for x in 0..g.nodes.len() {
                if !g.nodes[x].alive {
                    continue;
                }
                let mut implied: Vec<(CId, Deps)> = Vec::new();
                for &y in &g.nodes[x].children {
                    let y = &g.nodes[y];
                    if y.alive {
                        for r in &y.in_roles {
                            implied.extend(
                                self.t.role_domain[*r as usize]
                                    .iter()
                                    .map(|c| (*c, y.edge.clone())),
                            );
                        }
                    }
                }
                implied.extend(self.data_check(&g.nodes[x].label)?);
                for (c, d) in implied {
                    changed |= self.add(g, x, c, &d);
                }
                let label: Vec<(CId, Deps)> = g.nodes[x]
                    .label
                    .iter()
                    .map(|(c, d)| (*c, d.clone()))
                    .collect();
                for (c, d) in label {
                    match self.t.concept(c) {
                        Concept::Or(ops) => {
                            let lab = &g.nodes[x].label;
                            if ops.iter().any(|o| lab.contains_key(o)) {
                                continue;
                            }
                            let (viable, why) = self.viable(lab, ops, &d);
                            match viable.len() {
                                0 => return Err(why),
                                1 => changed |= self.add(g, x, viable[0], &why),
                                _ => {}
                            }
                        }
                        Concept::Forall(r, f) => {
                            let ys: Vec<usize> = self.successors(g, x, *r).collect();
                            for y in ys {
                                let why = union(&d, &g.nodes[y].edge);
                                changed |= self.add(g, y, *f, &why);
                            }
                        }
                        _ => {}
                    }
                }
                if let Some(d) = self.local_clash(&g.nodes[x].label) {
                    return Err(d);
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn expand(&self, g: &mut Graph) -> Step {
        loop {
            if let Err(d) = self.saturate(g) {
                return Step::Clash(d);
            }

            // nondeterministic disjunction: pick the one with fewest options
            let mut best: Option<(usize, Vec<CId>, Deps)> = None;
            for (x, node) in g.nodes.iter().enumerate().filter(|(_, n)| n.alive) {
                for (c, d) in &node.label {
                    if let Concept::Or(ops) = self.t.concept(*c) {
                        if ops.iter().any(|o| node.label.contains_key(o)) {
                            continue;
                        }
                        let (viable, why) = self.viable(&node.label, ops, d);
                        if best.as_ref().is_none_or(|(_, b, _)| viable.len() < b.len()) {
                            best = Some((x, viable, why));
                        }
                    }
                }
            }
            if let Some((x, options, why)) = best {
                return Step::Branch(
                    options.into_iter().map(|o| Choice::Add(x, o)).collect(),
                    why,
                );
            }

            // at-most restrictions: merge two successors, newest pairs first
            for x in 0..g.nodes.len() {
                if !g.nodes[x].alive {
                    continue;
                }
                for (c, d) in &g.nodes[x].label {
                    let Concept::AtMost(m, r) = self.t.concept(*c) else {
                        continue;
                    };
                    let succ: Vec<usize> = self.successors(g, x, *r).collect();
                    if succ.len() as u64 <= *m as u64 {
                        continue;
                    }
                    let mut why = d.clone();
                    let mut pairs = Vec::new();
                    for (i, &a) in succ.iter().enumerate() {
                        why.extend(g.nodes[a].edge.iter().copied());
                        for &b in &succ[i + 1..] {
                            match g.nodes[a].distinct.get(&b) {
                                Some(e) => why.extend(e.iter().copied()),
                                None => pairs.push((a.min(b), a.max(b))),
                            }
                        }
                    }
                    if pairs.is_empty() {
                        return Step::Clash(why);
                    }
                    pairs.sort_by(|p, q| q.1.cmp(&p.1).then(q.0.cmp(&p.0)));
                    return Step::Branch(
                        pairs
                            .into_iter()
                            .map(|(keep, drop)| Choice::Merge { keep, drop })
                            .collect(),
                        why,
                    );
                }
            }

            // generating rules on unblocked nodes
            let blocked = self.blocked(g);
            let mut generated = false;
            for (x, blocked) in blocked.into_iter().enumerate() {
                if !g.nodes[x].alive || blocked {
                    continue;
                }
                let label: Vec<(CId, Deps)> = g.nodes[x]
                    .label
                    .iter()
                    .map(|(c, d)| (*c, d.clone()))
                    .collect();
                for (c, d) in label {
                    match *self.t.concept(c) {
                        Concept::Exists(r, f) => {
                            if !self
                                .successors(g, x, r)
                                .any(|y| f == TOP || g.nodes[y].label.contains_key(&f))
                            {
                                self.new_node(g, Some(x), Some(r), &d, &[(f, d.clone())]);
                                generated = true;
                            }
                        }
                        Concept::AtLeast(n, r) if g.nodes[x].applied.insert(c) => {
                            let fresh: Vec<usize> = (0..n)
                                .map(|_| self.new_node(g, Some(x), Some(r), &d, &[]))
                                .collect();
                            for &a in &fresh {
                                for &b in &fresh {
                                    if a != b {
                                        g.nodes[a].distinct.insert(b, d.clone());
                                    }
                                }
                            }
                            generated = true;
                        }
                        _ => {}
                    }
                }
            }
            if !generated {
                return Step::Complete;
            }
        }
    }

    /// Anywhere subset blocking: a node is blocked when its parent is
    /// blocked, or when an older unblocked node outside its subtree has a
    /// label containing its own.
    fn blocked(&self, g: &Graph) -> Vec<bool> {
        let n = g.nodes.len();
        let mut out = vec![false; n];
        let mut done = vec![false; n];
        for x in 0..n {
            self.block(g, x, &mut out, &mut done);
        }
        out
    }

    fn block(&self, g: &Graph, x: usize, out: &mut [bool], done: &mut [bool]) {
        if done[x] {
            return;
        }
        done[x] = true;
        let node = &g.nodes[x];
        let Some(p) = node.parent.filter(|_| node.alive) else {
            return;
        };
        self.block(g, p, out, done);
        if out[p] {
            out[x] = true;
            return;
        }
        let below_x = |mut y: usize| loop {
            if y == x {
                return true;
            }
            match g.nodes[y].parent {
                Some(q) => y = q,
                None => return false,
            }
        };
        out[x] = (0..x).any(|y| {
            g.nodes[y].alive
                && done[y]
                && !out[y]
                && !below_x(y)
                && node.label.keys().all(|c| g.nodes[y].label.contains_key(c))
        });
    }
}

/// Merges sibling `drop` into `keep`; everything moved depends on `deps`.
fn merge(g: &mut Graph, keep: usize, drop: usize, deps: &Deps) {
    let gone = std::mem::replace(&mut g.nodes[drop], Node::dead());
    if let Some(p) = gone.parent {
        g.nodes[p].children.retain(|c| *c != drop);
    }
    for (&z, d) in &gone.distinct {
        g.nodes[z].distinct.remove(&drop);
        g.nodes[z].distinct.insert(keep, union(d, deps));
    }
    for &c in &gone.children {
        let child = &mut g.nodes[c];
        child.parent = Some(keep);
        child.edge.extend(deps.iter().copied());
    }
    let k = &mut g.nodes[keep];
    for (c, d) in gone.label {
        k.label.entry(c).or_insert_with(|| union(&d, deps));
    }
    k.in_roles.extend(gone.in_roles);
    k.edge
        .extend(gone.edge.into_iter().chain(deps.iter().copied()));
    k.children.extend(gone.children);
    for (z, d) in gone.distinct {
        k.distinct.entry(z).or_insert_with(|| union(&d, deps));
    }
    k.applied.extend(gone.applied);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::owl::{Axiom, ClassExpr, Ontology, OwlLiteral};
    use crate::reasoner::compile_tbox;

    fn n(s: &str) -> ClassExpr {
        ClassExpr::named(s)
    }

    fn sat(axioms: Vec<Axiom>, class: &str) -> SatVerdict {
        let mut o = Ontology::new("http://t#");
        o.axioms = axioms;
        is_satisfiable(&compile_tbox(&o), class)
    }

    #[test]
    fn min_max_clash() {
        let v = sat(
            vec![
                Axiom::SubClassOf(n("A"), ClassExpr::MinCardinality(2, "r".into())),
                Axiom::SubClassOf(n("A"), ClassExpr::MaxCardinality(1, "r".into())),
            ],
            "A",
        );
        assert_eq!(v.status, SatStatus::Unsat);
        assert_eq!(v.witness_size, None);
    }

    #[test]
    fn merging_satisfies_at_most() {
        let v = sat(
            vec![
                Axiom::SubClassOf(n("A"), ClassExpr::some("r", n("B"))),
                Axiom::SubClassOf(n("A"), ClassExpr::some("r", n("C"))),
                Axiom::SubClassOf(n("A"), ClassExpr::MaxCardinality(1, "r".into())),
            ],
            "A",
        );
        assert_eq!(v.status, SatStatus::Sat);
        assert_eq!(v.witness_size, Some(2));
    }

    #[test]
    fn merging_respects_disjointness() {
        let v = sat(
            vec![
                Axiom::DisjointClasses(vec![n("B"), n("C")]),
                Axiom::SubClassOf(n("A"), ClassExpr::some("r", n("B"))),
                Axiom::SubClassOf(n("A"), ClassExpr::some("r", n("C"))),
                Axiom::SubClassOf(n("A"), ClassExpr::MaxCardinality(1, "r".into())),
            ],
            "A",
        );
        assert_eq!(v.status, SatStatus::Unsat);
    }

    #[test]
    fn cyclic_inclusion_terminates() {
        let v = sat(
            vec![Axiom::SubClassOf(n("A"), ClassExpr::some("r", n("A")))],
            "A",
        );
        assert_eq!(v.status, SatStatus::Sat);
        assert_eq!(v.witness_size, Some(2));
    }

    #[test]
    fn disjunction_backtracks() {
        let v = sat(
            vec![
                Axiom::SubClassOf(n("A"), ClassExpr::UnionOf(vec![n("B"), n("C")])),
                Axiom::SubClassOf(n("B"), ClassExpr::complement(n("A"))),
            ],
            "A",
        );
        assert_eq!(v.status, SatStatus::Sat);
    }

    #[test]
    fn functional_values() {
        let t = OwlLiteral::new("true", crate::model::Datatype::Boolean);
        let f = OwlLiteral::new("0", crate::model::Datatype::Boolean);
        let both = ClassExpr::IntersectionOf(vec![
            ClassExpr::DataHasValue("w".into(), t.clone()),
            ClassExpr::DataHasValue("w".into(), f),
        ]);
        let v = sat(
            vec![
                Axiom::SubClassOf(n("C"), ClassExpr::DataExactCardinality(1, "w".into())),
                Axiom::SubClassOf(n("C"), both.clone()),
            ],
            "C",
        );
        assert_eq!(v.status, SatStatus::Unsat);
        let v = sat(vec![Axiom::SubClassOf(n("C"), both)], "C");
        assert_eq!(v.status, SatStatus::Sat);
    }

    #[test]
    fn domain_is_absorbed() {
        let v = sat(
            vec![
                Axiom::DisjointClasses(vec![n("A"), n("B")]),
                Axiom::ObjectPropertyDomain("r".into(), n("B")),
                Axiom::SubClassOf(n("A"), ClassExpr::MinCardinality(1, "r".into())),
            ],
            "A",
        );
        assert_eq!(v.status, SatStatus::Unsat);
    }
}
