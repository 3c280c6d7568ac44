use std::collections::{BTreeSet, HashMap};

use crate::model::Datatype;
use crate::owl::{canonical_lexical, Axiom, ClassExpr, Ontology, OwlLiteral};

pub(crate) type CId = u32;

/// Concept in negation normal form. Operand lists of `And`/`Or` are sorted
/// and free of duplicates, so structurally equal concepts share an id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Concept {
    Top,
    Bottom,
    Atom(u32),
    NotAtom(u32),
    And(Vec<CId>),
    Or(Vec<CId>),
    Exists(u32, CId),
    Forall(u32, CId),
    AtLeast(u32, u32),
    AtMost(u32, u32),
    HasValue(u32, u32),
    NotValue(u32, u32),
    DataAtLeast(u32, u32),
    DataAtMost(u32, u32),
}

pub(crate) const TOP: CId = 0;
pub(crate) const BOTTOM: CId = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    /// Attach `A ⊑ C` to `A` and domain axioms to their property instead of
    /// adding them to every node as disjunctions.
    pub absorption: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { absorption: true }
    }
}

/// Compiled terminology. Immutable once built; any number of satisfiability
/// tests may share it.
#[derive(Debug, Clone)]
pub struct TBox {
    pub(crate) concepts: Vec<Concept>,
    ids: HashMap<Concept, CId>,
    pub(crate) atoms: Vec<String>,
    atom_ids: HashMap<String, u32>,
    pub(crate) roles: Vec<String>,
    role_ids: HashMap<String, u32>,
    pub(crate) dprops: Vec<String>,
    dprop_ids: HashMap<String, u32>,
    /// Canonical (datatype, lexical) values.
    pub(crate) values: Vec<(Datatype, String)>,
    value_ids: HashMap<(Datatype, String), u32>,
    /// Per atom: concepts every instance also belongs to.
    pub(crate) unfold: Vec<Vec<CId>>,
    /// Concepts every individual belongs to.
    pub(crate) global: Vec<CId>,
    /// Per role: concepts of every individual with a successor.
    pub(crate) role_domain: Vec<Vec<CId>>,
    /// Per data property: concepts of every individual with a value.
    pub(crate) data_domain: Vec<Vec<CId>>,
    /// Per data property: allowed datatypes, `None` when unrestricted.
    pub(crate) data_range: Vec<Option<BTreeSet<Datatype>>>,
    declared: Vec<String>,
}

impl TBox {
    fn empty() -> Self {
        let mut t = TBox {
            concepts: Vec::new(),
            ids: HashMap::new(),
            atoms: Vec::new(),
            atom_ids: HashMap::new(),
            roles: Vec::new(),
            role_ids: HashMap::new(),
            dprops: Vec::new(),
            dprop_ids: HashMap::new(),
            values: Vec::new(),
            value_ids: HashMap::new(),
            unfold: Vec::new(),
            global: Vec::new(),
            role_domain: Vec::new(),
            data_domain: Vec::new(),
            data_range: Vec::new(),
            declared: Vec::new(),
        };
        t.intern(Concept::Top);
        t.intern(Concept::Bottom);
        t
    }

    /// Declared classes in declaration order.
    pub fn classes(&self) -> &[String] {
        &self.declared
    }

    pub(crate) fn atom_id(&self, name: &str) -> Option<u32> {
        self.atom_ids.get(name).copied()
    }

    pub(crate) fn lookup(&self, c: &Concept) -> Option<CId> {
        self.ids.get(c).copied()
    }

    pub(crate) fn concept(&self, c: CId) -> &Concept {
        &self.concepts[c as usize]
    }

    fn intern(&mut self, c: Concept) -> CId {
        if let Some(id) = self.ids.get(&c) {
            return *id;
        }
        let id = self.concepts.len() as CId;
        self.concepts.push(c.clone());
        self.ids.insert(c, id);
        id
    }

    fn atom(&mut self, name: &str) -> u32 {
        if let Some(id) = self.atom_ids.get(name) {
            return *id;
        }
        let id = self.atoms.len() as u32;
        self.atoms.push(name.to_string());
        self.atom_ids.insert(name.to_string(), id);
        self.unfold.push(Vec::new());
        self.intern(Concept::Atom(id));
        id
    }

    fn role(&mut self, name: &str) -> u32 {
        if let Some(id) = self.role_ids.get(name) {
            return *id;
        }
        let id = self.roles.len() as u32;
        self.roles.push(name.to_string());
        self.role_ids.insert(name.to_string(), id);
        self.role_domain.push(Vec::new());
        id
    }

    fn dprop(&mut self, name: &str) -> u32 {
        if let Some(id) = self.dprop_ids.get(name) {
            return *id;
        }
        let id = self.dprops.len() as u32;
        self.dprops.push(name.to_string());
        self.dprop_ids.insert(name.to_string(), id);
        self.data_domain.push(Vec::new());
        self.data_range.push(None);
        id
    }

    fn value(&mut self, lit: &OwlLiteral) -> Option<u32> {
        let key = (lit.datatype, canonical_lexical(lit.datatype, &lit.lexical)?);
        if let Some(id) = self.value_ids.get(&key) {
            return Some(*id);
        }
        let id = self.values.len() as u32;
        self.values.push(key.clone());
        self.value_ids.insert(key, id);
        Some(id)
    }

    fn and(&mut self, ops: Vec<CId>) -> CId {
        let mut flat = BTreeSet::new();
        for op in ops {
            match self.concept(op) {
                Concept::Top => {}
                Concept::Bottom => return BOTTOM,
                Concept::And(inner) => flat.extend(inner.iter().copied()),
                _ => {
                    flat.insert(op);
                }
            }
        }
        for &op in &flat {
            if let Concept::Atom(a) = self.concept(op) {
                if self
                    .ids
                    .get(&Concept::NotAtom(*a))
                    .is_some_and(|n| flat.contains(n))
                {
                    return BOTTOM;
                }
            }
        }
        match flat.len() {
            0 => TOP,
            1 => *flat.iter().next().unwrap(),
            _ => self.intern(Concept::And(flat.into_iter().collect())),
        }
    }

    fn or(&mut self, ops: Vec<CId>) -> CId {
        let mut flat = BTreeSet::new();
        for op in ops {
            match self.concept(op) {
                Concept::Bottom => {}
                Concept::Top => return TOP,
                Concept::Or(inner) => flat.extend(inner.iter().copied()),
                _ => {
                    flat.insert(op);
                }
            }
        }
        for &op in &flat {
            if let Concept::Atom(a) = self.concept(op) {
                if self
                    .ids
                    .get(&Concept::NotAtom(*a))
                    .is_some_and(|n| flat.contains(n))
                {
                    return TOP;
                }
            }
        }
        match flat.len() {
            0 => BOTTOM,
            1 => *flat.iter().next().unwrap(),
            _ => self.intern(Concept::Or(flat.into_iter().collect())),
        }
    }

    fn at_least(&mut self, n: u32, role: u32) -> CId {
        if n == 0 {
            TOP
        } else {
            self.intern(Concept::AtLeast(n, role))
        }
    }

    fn data_at_least(&mut self, n: u32, prop: u32) -> CId {
        if n == 0 {
            TOP
        } else {
            self.intern(Concept::DataAtLeast(n, prop))
        }
    }

    /// NNF of `c` (or of its complement when `positive` is false).
    fn nnf(&mut self, c: &ClassExpr, positive: bool) -> CId {
        match c {
            ClassExpr::Named(n) => {
                let a = self.atom(n);
                self.intern(if positive {
                    Concept::Atom(a)
                } else {
                    Concept::NotAtom(a)
                })
            }
            ClassExpr::IntersectionOf(ops) | ClassExpr::UnionOf(ops) => {
                let ids: Vec<CId> = ops.iter().map(|o| self.nnf(o, positive)).collect();
                let conj = matches!(c, ClassExpr::IntersectionOf(_)) == positive;
                if conj {
                    self.and(ids)
                } else {
                    self.or(ids)
                }
            }
            ClassExpr::ComplementOf(inner) => self.nnf(inner, !positive),
            ClassExpr::SomeValuesFrom(p, filler) => {
                let r = self.role(p);
                let f = self.nnf(filler, positive);
                match (positive, f) {
                    (true, BOTTOM) => BOTTOM,
                    (false, TOP) => TOP,
                    (true, _) => self.intern(Concept::Exists(r, f)),
                    (false, _) => self.intern(Concept::Forall(r, f)),
                }
            }
            ClassExpr::MinCardinality(n, p) => {
                let r = self.role(p);
                match (positive, *n) {
                    (true, n) => self.at_least(n, r),
                    (false, 0) => BOTTOM,
                    (false, n) => self.intern(Concept::AtMost(n - 1, r)),
                }
            }
            ClassExpr::MaxCardinality(n, p) => {
                let r = self.role(p);
                if positive {
                    self.intern(Concept::AtMost(*n, r))
                } else {
                    self.at_least(n + 1, r)
                }
            }
            ClassExpr::ExactCardinality(n, p) => {
                let min = self.nnf(&ClassExpr::MinCardinality(*n, p.clone()), positive);
                let max = self.nnf(&ClassExpr::MaxCardinality(*n, p.clone()), positive);
                if positive {
                    self.and(vec![min, max])
                } else {
                    self.or(vec![min, max])
                }
            }
            ClassExpr::DataHasValue(p, lit) => {
                let q = self.dprop(p);
                match (self.value(lit), positive) {
                    (Some(v), true) => self.intern(Concept::HasValue(q, v)),
                    (Some(v), false) => self.intern(Concept::NotValue(q, v)),
                    // a literal outside its lexical space denotes nothing
                    (None, true) => BOTTOM,
                    (None, false) => TOP,
                }
            }
            ClassExpr::DataExactCardinality(n, p) => {
                let q = self.dprop(p);
                if positive {
                    let lo = self.data_at_least(*n, q);
                    let hi = self.intern(Concept::DataAtMost(*n, q));
                    self.and(vec![lo, hi])
                } else {
                    let below = if *n == 0 {
                        BOTTOM
                    } else {
                        self.intern(Concept::DataAtMost(n - 1, q))
                    };
                    let above = self.data_at_least(n + 1, q);
                    self.or(vec![below, above])
                }
            }
        }
    }

    fn subsume(&mut self, sub: &ClassExpr, sup: &ClassExpr, opts: CompileOptions) {
        let d = self.nnf(sup, true);
        if d == TOP {
            return;
        }
        if let (ClassExpr::Named(a), true) = (sub, opts.absorption) {
            let a = self.atom(a);
            self.unfold[a as usize].push(d);
            return;
        }
        let not_c = self.nnf(sub, false);
        let gci = self.or(vec![not_c, d]);
        self.global.push(gci);
    }
}

/// Compiles with default options.
pub fn compile_tbox(o: &Ontology) -> TBox {
    compile_tbox_with(o, CompileOptions::default())
}

pub fn compile_tbox_with(o: &Ontology, opts: CompileOptions) -> TBox {
    let mut t = TBox::empty();
    for ax in &o.axioms {
        match ax {
            Axiom::DeclareClass(c) => {
                t.atom(c);
                if !t.declared.contains(c) {
                    t.declared.push(c.clone());
                }
            }
            Axiom::DeclareObjectProperty(p) => {
                t.role(p);
            }
            Axiom::DeclareDataProperty(p) => {
                t.dprop(p);
            }
            Axiom::SubClassOf(sub, sup) => t.subsume(sub, sup, opts),
            Axiom::EquivalentClasses(a, b) => {
                t.subsume(a, b, opts);
                t.subsume(b, a, opts);
            }
            Axiom::DisjointClasses(ops) => {
                for i in 0..ops.len() {
                    for j in i + 1..ops.len() {
                        t.subsume(&ops[i], &ClassExpr::complement(ops[j].clone()), opts);
                    }
                }
            }
            Axiom::ObjectPropertyDomain(p, c) => {
                let r = t.role(p);
                let d = t.nnf(c, true);
                if opts.absorption {
                    t.role_domain[r as usize].push(d);
                } else {
                    let none = t.intern(Concept::AtMost(0, r));
                    let gci = t.or(vec![none, d]);
                    t.global.push(gci);
                }
            }
            Axiom::ObjectPropertyRange(p, c) => {
                let r = t.role(p);
                let d = t.nnf(c, true);
                if d != TOP {
                    let all = t.intern(Concept::Forall(r, d));
                    t.global.push(all);
                }
            }
            Axiom::DataPropertyDomain(p, c) => {
                let q = t.dprop(p);
                let d = t.nnf(c, true);
                if opts.absorption {
                    t.data_domain[q as usize].push(d);
                } else {
                    let none = t.intern(Concept::DataAtMost(0, q));
                    let gci = t.or(vec![none, d]);
                    t.global.push(gci);
                }
            }
            Axiom::DataPropertyRange(p, dt) => {
                let q = t.dprop(p) as usize;
                let allowed =
                    t.data_range[q].get_or_insert_with(|| Datatype::ALL.into_iter().collect());
                allowed.retain(|d| d == dt);
            }
        }
    }
    t.global.sort_unstable();
    t.global.dedup();
    t.global.retain(|c| *c != TOP);
    t
}
