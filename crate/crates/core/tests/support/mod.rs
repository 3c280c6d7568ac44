//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use restcheck_core::mocl::{CmpOp, Literal, LiteralKind, NavPath, OclExpr};
use restcheck_core::model::{
    Association, AttributeDef, BehavioralModel, Datatype, MaxCard, ResourceDef, ResourceKind,
    ResourceModel, State, StateKind, Transition, Trigger,
};
use restcheck_core::owl::{Axiom, ClassExpr, Ontology, OwlLiteral};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn corpus(name: &str) -> String {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn corpus_path(name: &str) -> String {
    format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Ontology over at most 4 classes, 2 roles and 2 data properties with
/// cardinality bounds up to 2.
pub struct OntologyGen {
    classes: Vec<String>,
    roles: Vec<String>,
    dprops: Vec<String>,
}

impl OntologyGen {
    pub fn generate(r: &mut impl Rng) -> (Ontology, Vec<String>) {
        let g = OntologyGen {
            classes: (0..r.gen_range(1..=4)).map(|i| format!("A{i}")).collect(),
            roles: (0..r.gen_range(0..=2)).map(|i| format!("r{i}")).collect(),
            dprops: (0..r.gen_range(0..=2)).map(|i| format!("d{i}")).collect(),
        };
        let mut o = Ontology::new("http://restcheck.example/random#");
        for c in &g.classes {
            o.push(Axiom::DeclareClass(c.clone()));
        }
        for p in &g.roles {
            o.push(Axiom::DeclareObjectProperty(p.clone()));
        }
        for p in &g.dprops {
            o.push(Axiom::DeclareDataProperty(p.clone()));
        }
        for _ in 0..r.gen_range(1..=5) {
            let ax = g.axiom(r);
            o.push(ax);
        }
        (o, g.classes.clone())
    }

    fn named(&self, r: &mut impl Rng) -> ClassExpr {
        ClassExpr::named(self.classes.choose(r).unwrap())
    }

    fn literal(r: &mut impl Rng) -> OwlLiteral {
        match r.gen_range(0..4) {
            0 => OwlLiteral::new("true", Datatype::Boolean),
            1 => OwlLiteral::new("false", Datatype::Boolean),
            2 => OwlLiteral::new(["0", "1", "01"][r.gen_range(0..3)], Datatype::Integer),
            _ => OwlLiteral::new(["a", "b"][r.gen_range(0..2)], Datatype::String),
        }
    }

    pub fn expr(&self, r: &mut impl Rng, depth: u32) -> ClassExpr {
        if depth == 0 {
            return self.named(r);
        }
        loop {
            let pick = r.gen_range(0..14);
            let e = match pick {
                0..=3 => self.named(r),
                4 => ClassExpr::complement(self.expr(r, depth - 1)),
                5 | 6 => {
                    let ops = vec![self.expr(r, depth - 1), self.expr(r, depth - 1)];
                    if pick == 5 {
                        ClassExpr::IntersectionOf(ops)
                    } else {
                        ClassExpr::UnionOf(ops)
                    }
                }
                7 | 8 if !self.roles.is_empty() => {
                    ClassExpr::some(self.roles.choose(r).unwrap(), self.expr(r, depth - 1))
                }
                9 | 10 if !self.roles.is_empty() => {
                    let p = self.roles.choose(r).unwrap().clone();
                    let n = r.gen_range(0..=2);
                    match r.gen_range(0..3) {
                        0 => ClassExpr::MinCardinality(n, p),
                        1 => ClassExpr::MaxCardinality(n, p),
                        _ => ClassExpr::ExactCardinality(n, p),
                    }
                }
                11 | 12 if !self.dprops.is_empty() => ClassExpr::DataHasValue(
                    self.dprops.choose(r).unwrap().clone(),
                    Self::literal(r),
                ),
                13 if !self.dprops.is_empty() => ClassExpr::DataExactCardinality(
                    r.gen_range(0..=2),
                    self.dprops.choose(r).unwrap().clone(),
                ),
                _ => continue,
            };
            return e;
        }
    }

    fn axiom(&self, r: &mut impl Rng) -> Axiom {
        loop {
            let a = match r.gen_range(0..12) {
                0..=3 => {
                    let sub = if r.gen_bool(0.7) {
                        self.named(r)
                    } else {
                        self.expr(r, 1)
                    };
                    Axiom::SubClassOf(sub, self.expr(r, 2))
                }
                4 | 5 => Axiom::EquivalentClasses(self.named(r), self.expr(r, 2)),
                6 if self.classes.len() >= 2 => {
                    let mut cs = self.classes.clone();
                    cs.shuffle(r);
                    let k = r.gen_range(2..=cs.len());
                    Axiom::DisjointClasses(cs[..k].iter().map(ClassExpr::named).collect())
                }
                7 if !self.roles.is_empty() => Axiom::ObjectPropertyDomain(
                    self.roles.choose(r).unwrap().clone(),
                    self.expr(r, 1),
                ),
                8 if !self.roles.is_empty() => Axiom::ObjectPropertyRange(
                    self.roles.choose(r).unwrap().clone(),
                    self.expr(r, 1),
                ),
                9 if !self.dprops.is_empty() => Axiom::DataPropertyDomain(
                    self.dprops.choose(r).unwrap().clone(),
                    self.expr(r, 1),
                ),
                10 if !self.dprops.is_empty() => {
                    let dt =
                        [Datatype::Boolean, Datatype::Integer, Datatype::String][r.gen_range(0..3)];
                    Axiom::DataPropertyRange(self.dprops.choose(r).unwrap().clone(), dt)
                }
                11 => Axiom::SubClassOf(self.named(r), self.named(r)),
                _ => continue,
            };
            return a;
        }
    }
}

const ATTR_NAMES: [&str; 6] = ["name", "count", "flag", "price", "status", "note"];
const LABELS: [&str; 6] = ["items", "owner", "status", "entries", "name", "detail"];

/// Structurally valid resource and behavioral models. Attribute names and
/// association labels are drawn from small pools so that they collide.
pub struct ModelGen;

impl ModelGen {
    pub fn resource_model(r: &mut impl Rng) -> ResourceModel {
        let n = r.gen_range(1..=6);
        let mut rm = ResourceModel {
            name: format!("M{}", r.gen_range(0..100)),
            ..Default::default()
        };
        for i in 0..n {
            let collection = r.gen_bool(0.3);
            let name = if collection {
                format!("list{i}")
            } else {
                format!("Res{i}")
            };
            let parent = if !collection && i > 0 && r.gen_bool(0.25) {
                rm.resources
                    .iter()
                    .filter(|p| p.kind == ResourceKind::Normal)
                    .map(|p| p.name.clone())
                    .collect::<Vec<_>>()
                    .choose(r)
                    .cloned()
            } else {
                None
            };
            let inherited: Vec<String> = parent
                .as_deref()
                .map(|p| {
                    rm.effective_attributes(p)
                        .into_iter()
                        .map(|(_, a)| a.name.clone())
                        .collect()
                })
                .unwrap_or_default();
            let mut attributes = Vec::new();
            if !collection {
                let min = if parent.is_some() { 0 } else { 1 };
                for _ in 0..r.gen_range(min..=2) {
                    let a = ATTR_NAMES.choose(r).unwrap().to_string();
                    if inherited.contains(&a)
                        || attributes.iter().any(|x: &AttributeDef| x.name == a)
                    {
                        continue;
                    }
                    attributes.push(AttributeDef {
                        name: a,
                        datatype: Datatype::ALL[r.gen_range(0..4)],
                    });
                }
                if attributes.is_empty() && parent.is_none() {
                    attributes.push(AttributeDef {
                        name: format!("id{i}"),
                        datatype: Datatype::Integer,
                    });
                }
            }
            rm.resources.push(ResourceDef {
                name: name.clone(),
                kind: if collection {
                    ResourceKind::Collection
                } else {
                    ResourceKind::Normal
                },
                attributes,
                parent,
                is_root: i == 0,
            });
            if i > 0 {
                let source = rm.resources[r.gen_range(0..i)].name.clone();
                Self::associate(r, &mut rm, source, name);
            }
        }
        for _ in 0..r.gen_range(0..=2) {
            let source = rm.resources.choose(r).unwrap().name.clone();
            let target = rm.resources.choose(r).unwrap().name.clone();
            Self::associate(r, &mut rm, source, target);
        }
        rm
    }

    fn associate(r: &mut impl Rng, rm: &mut ResourceModel, source: String, target: String) {
        let used = |l: &str| rm.associations.iter().any(|a| a.label == l);
        let pick = LABELS.choose(r).unwrap().to_string();
        let label = if used(&pick) {
            format!("link{}", rm.associations.len())
        } else {
            pick
        };
        let min = r.gen_range(0..=2);
        let max = if r.gen_bool(0.4) {
            MaxCard::Unbounded
        } else {
            MaxCard::Bounded(min + r.gen_range(0..=2))
        };
        rm.associations.push(Association {
            label,
            source,
            target,
            min,
            max,
        });
    }

    /// Atomic invariants that resolve from `context`.
    fn leaf(r: &mut impl Rng, rm: &ResourceModel, context: &str) -> Option<OclExpr> {
        let mut options = Vec::new();
        let hops: Vec<(Vec<String>, String)> = {
            let mut out = vec![(Vec::new(), context.to_string())];
            for a in &rm.associations {
                if rm.navigable_association(context, &a.label).is_some() {
                    out.push((vec![a.label.clone()], a.target.clone()));
                }
            }
            out
        };
        for (path, at) in &hops {
            if !path.is_empty() {
                options.push(OclExpr::SizeCmp {
                    path: NavPath::new(path.clone()),
                    op: [CmpOp::Eq, CmpOp::Ge, CmpOp::Le, CmpOp::Gt, CmpOp::Lt][r.gen_range(0..5)],
                    bound: r.gen_range(0..=3),
                });
            }
            for (_, a) in rm.effective_attributes(at) {
                let mut segs = path.clone();
                segs.push(a.name.clone());
                options.push(OclExpr::AttrEq {
                    path: NavPath::new(segs),
                    value: Self::literal(r, a.datatype),
                });
            }
        }
        options.choose(r).cloned()
    }

    pub fn literal(r: &mut impl Rng, dt: Datatype) -> Literal {
        match dt {
            Datatype::Boolean => Literal::boolean(r.gen_bool(0.5)),
            Datatype::Integer => Literal::integer(r.gen_range(-3..=12)),
            Datatype::Decimal if r.gen_bool(0.5) => Literal::integer(r.gen_range(0..=5)),
            Datatype::Decimal => Literal {
                kind: LiteralKind::Decimal,
                lexical: ["1.5", "0.25", "10.0"][r.gen_range(0..3)].into(),
            },
            Datatype::String => Literal::string(
                ["open", "two words", "q\"uote", "back\\slash", ""][r.gen_range(0..5)],
            ),
        }
    }

    /// A µOCL expression over `context`, or `None` when nothing resolves.
    pub fn ocl(r: &mut impl Rng, rm: &ResourceModel, context: &str, depth: u32) -> Option<OclExpr> {
        if depth == 0 || r.gen_bool(0.4) {
            return Self::leaf(r, rm, context);
        }
        let ops: Vec<OclExpr> = (0..r.gen_range(2..=3))
            .filter_map(|_| Self::ocl(r, rm, context, depth - 1))
            .collect();
        match ops.len() {
            0 => None,
            1 => ops.into_iter().next(),
            _ if r.gen_bool(0.5) => Some(OclExpr::and(ops)),
            _ => Some(OclExpr::or(ops)),
        }
    }

    pub fn behavioral_model(r: &mut impl Rng, rm: &ResourceModel) -> BehavioralModel {
        let root = rm.resources[0].name.clone();
        let mut bm = BehavioralModel {
            name: "Life".into(),
            for_resource: root.clone(),
            ..Default::default()
        };
        let state = |name: String, kind, parent: Option<String>, region, invariant| State {
            name,
            kind,
            parent,
            region,
            invariant,
        };
        bm.states
            .push(state("init".into(), StateKind::Initial, None, 0, None));
        for i in 0..r.gen_range(1..=4) {
            let inv = if r.gen_bool(0.7) {
                Self::ocl(r, rm, &root, 2)
            } else {
                None
            };
            bm.states
                .push(state(format!("s{i}"), StateKind::Simple, None, 0, inv));
        }
        if r.gen_bool(0.4) {
            let inv = if r.gen_bool(0.5) {
                Self::ocl(r, rm, &root, 1)
            } else {
                None
            };
            bm.states
                .push(state("busy".into(), StateKind::Composite, None, 0, inv));
            let regions = r.gen_range(1..=2);
            for i in 0..r.gen_range(1..=3) {
                let inv = if r.gen_bool(0.6) {
                    Self::ocl(r, rm, &root, 1)
                } else {
                    None
                };
                bm.states.push(state(
                    format!("sub{i}"),
                    StateKind::Simple,
                    Some("busy".into()),
                    i % regions,
                    inv,
                ));
            }
        }
        if r.gen_bool(0.5) {
            bm.states
                .push(state("done".into(), StateKind::Final, None, 0, None));
        }
        let names: Vec<String> = bm.states.iter().map(|s| s.name.clone()).collect();
        let sources: Vec<&String> = names.iter().filter(|n| n.as_str() != "done").collect();
        let targets: Vec<&String> = names.iter().filter(|n| n.as_str() != "init").collect();
        bm.transitions
            .push(Self::transition(r, rm, "init", &names[1]));
        for _ in 0..r.gen_range(0..=4) {
            let s = sources.choose(r).unwrap().to_string();
            let t = targets.choose(r).unwrap().to_string();
            bm.transitions.push(Self::transition(r, rm, &s, &t));
        }
        bm
    }

    fn transition(r: &mut impl Rng, rm: &ResourceModel, source: &str, target: &str) -> Transition {
        Transition {
            source: source.into(),
            target: target.into(),
            trigger: [Trigger::Put, Trigger::Post, Trigger::Delete][r.gen_range(0..3)],
            target_resource: if r.gen_bool(0.5) {
                Some(rm.resources.choose(r).unwrap().name.clone())
            } else {
                None
            },
            guard: Self::text(r),
            post: Self::text(r),
        }
    }

    fn text(r: &mut impl Rng) -> Option<String> {
        r.gen_bool(0.3)
            .then(|| ["paid", "self.x > 1", "say \"hi\""][r.gen_range(0..3)].to_string())
    }
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the `restcheck` binary.
pub fn restcheck(args: &[&str]) -> Run {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_restcheck"))
        .args(args)
        .output()
        .expect("restcheck runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// A small valid model plus one defect per structural rule, each paired
/// with the only code it may produce.
pub const SHOP: &str = r#"resources Shop {
  root resource Store {
    attr name: string
  }
  collection orders
  resource Order {
    attr total: decimal
  }

  association orders: Store -> orders [0..1]
  association order: orders -> Order [0..*]
}

behavior Flow for Store {
  initial start
  state open {
    inv: self.orders->size() = 1
  }
  state closed

  transition start -> open on POST Order
  transition open -> closed on PUT Store
}
"#;

pub fn structural_defects() -> Vec<(&'static str, String, &'static str)> {
    let edit = |from: &str, to: &str| {
        assert!(SHOP.contains(from), "{from}");
        SHOP.replacen(from, to, 1)
    };
    vec![
        (
            "isolated resource",
            edit(
                "  collection orders\n",
                "  collection orders\n  resource Orphan {\n    attr tag: string\n  }\n",
            ),
            "CONNECTIVITY",
        ),
        (
            "duplicate association label",
            edit(
                "  association order: orders",
                "  association order: Store -> Order [0..1]\n  association order: orders",
            ),
            "DUPLICATE_LABEL",
        ),
        (
            "collection with attribute",
            edit(
                "  collection orders\n",
                "  collection orders {\n    attr size: integer\n  }\n",
            ),
            "COLLECTION_HAS_ATTR",
        ),
        (
            "normal resource without attributes",
            edit(
                "  resource Order {\n    attr total: decimal\n  }\n",
                "  resource Order\n",
            ),
            "NORMAL_NO_ATTR",
        ),
        (
            "min greater than max",
            edit("Order [0..*]", "Order [3..1]"),
            "BAD_CARDINALITY",
        ),
        ("GET trigger", edit("on PUT Store", "on GET Store"), "PARSE"),
    ]
}

/// `format ∘ parse` is the identity on the structure and on the printed text.
pub fn dsl_fixed_point(text: &str, origin: &str) -> Result<(), String> {
    use restcheck_core::dsl::{format_model, parse_model};
    let first = parse_model(text, origin).map_err(|e| format!("{origin}: {e}"))?;
    let printed = format_model(&first.resources, first.behavior.as_ref());
    let second =
        parse_model(&printed, origin).map_err(|e| format!("{origin} reprinted: {e}\n{printed}"))?;
    if first.resources != second.resources || first.behavior != second.behavior {
        return Err(format!("{origin}: reparsed model differs\n{printed}"));
    }
    if format_model(&second.resources, second.behavior.as_ref()) != printed {
        return Err(format!("{origin}: second print differs"));
    }
    Ok(())
}

/// The model prints to text that parses back to it, then stays fixed.
pub fn dsl_model_fixed_point(
    rm: &ResourceModel,
    bm: Option<&BehavioralModel>,
    origin: &str,
) -> Result<(), String> {
    use restcheck_core::dsl::{format_model, parse_model};
    let text = format_model(rm, bm);
    let parsed = parse_model(&text, origin).map_err(|e| format!("{origin}: {e}\n{text}"))?;
    if &parsed.resources != rm || parsed.behavior.as_ref() != bm {
        return Err(format!(
            "{origin}: parsed model differs from the generated one\n{text}"
        ));
    }
    dsl_fixed_point(&text, origin)
}

pub fn ofn_fixed_point(o: &Ontology, origin: &str) -> Result<(), String> {
    use restcheck_core::owl::{parse_functional_syntax, serialize};
    let text = serialize(o);
    let back = parse_functional_syntax(&text).map_err(|e| format!("{origin}: {e}\n{text}"))?;
    if &back != o {
        return Err(format!("{origin}: parsed ontology differs\n{text}"));
    }
    if serialize(&back) != text {
        return Err(format!("{origin}: second serialization differs"));
    }
    Ok(())
}

pub fn ocl_fixed_point(e: &OclExpr, origin: &str) -> Result<(), String> {
    let printed = e.to_string();
    let back = restcheck_core::mocl::parse_ocl(&printed)
        .map_err(|err| format!("{origin}: {err}\n{printed}"))?;
    if &back != e {
        return Err(format!("{origin}: reparsed invariant differs: {printed}"));
    }
    if back.to_string() != printed {
        return Err(format!("{origin}: second print differs"));
    }
    Ok(())
}

pub const MODELS: [&str; 3] = [
    "hotel_booking.model",
    "hb_mutated_m1.model",
    "snippet.model",
];

/// The first `n` generated µOCL invariants, each with its seed.
pub fn generated_invariants(n: usize) -> Vec<(u64, OclExpr)> {
    let mut out = Vec::new();
    let mut seed = 20_000;
    while out.len() < n {
        let mut r = rng(seed);
        let rm = ModelGen::resource_model(&mut r);
        if let Some(e) = ModelGen::ocl(&mut r, &rm, &rm.resources[0].name, 3) {
            out.push((seed, e));
        }
        seed += 1;
    }
    out
}
