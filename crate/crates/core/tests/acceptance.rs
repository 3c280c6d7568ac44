//! Acceptance gate: one PASS/FAIL line per criterion.

mod support;

use std::time::{Duration, Instant};

use restcheck_core::dsl::parse_model;
use restcheck_core::model::Datatype;
use restcheck_core::owl::{Axiom, ClassExpr, Ontology, OwlLiteral, DEFAULT_BASE_IRI};
use restcheck_core::pipeline;
use restcheck_core::reasoner::{
    bounded_model_search, compile_tbox, is_satisfiable, OracleResult, SatStatus,
};
use restcheck_core::translate::translate_models;

use support::{corpus, corpus_path, restcheck, ModelGen, OntologyGen, MODELS};

const CORPUS_LIMIT: Duration = Duration::from_secs(1);
const CORPUS_ORACLE: &str = "bounded:3";
const M1_BOUND: u32 = 4;
const CYCLE_LIMIT: Duration = Duration::from_millis(100);
const DIFFERENTIAL_CASES: u64 = 600;
const DIFFERENTIAL_BOUND: u32 = 4;
const DIFFERENTIAL_LIMIT: Duration = Duration::from_secs(60);
const ROUND_TRIP_GENERATED: u64 = 200;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn json(stdout: &str) -> Result<serde_json::Value, String> {
    serde_json::from_str(stdout).map_err(|e| format!("stdout is not JSON: {e}"))
}

/// States declared in a model file, found by scanning its lines.
fn declared_states(text: &str) -> usize {
    text.lines()
        .map(str::trim_start)
        .filter(|l| l.starts_with("state ") || l.starts_with("final "))
        .count()
}

fn corpus_consistency() -> Outcome {
    let path = corpus_path("hotel_booking.model");
    let start = Instant::now();
    let run = restcheck(&["check", &path, "--format", "json"]);
    let elapsed = start.elapsed();
    ensure(run.code == 0, || {
        format!("exit {} (stderr: {})", run.code, run.stderr.trim())
    })?;
    let v = json(&run.stdout)?;
    let concepts = v["concepts"].as_array().ok_or("no concepts array")?;
    let unsat: Vec<_> = concepts.iter().filter(|c| c["status"] != "sat").collect();
    ensure(unsat.is_empty(), || format!("unsatisfiable: {unsat:?}"))?;
    ensure(elapsed < CORPUS_LIMIT, || {
        format!("took {elapsed:?}, limit {CORPUS_LIMIT:?}")
    })?;
    let states = declared_states(&corpus("hotel_booking.model"));
    let text = restcheck(&["check", &path]);
    let summary = format!("CONSISTENT: 6 resources, {states} states, all satisfiable");
    ensure(text.stdout.contains(&summary), || {
        format!("missing '{summary}' in:\n{}", text.stdout)
    })?;
    let cross = restcheck(&["check", &path, "--oracle", CORPUS_ORACLE]);
    ensure(cross.code == 0, || {
        format!(
            "--oracle {CORPUS_ORACLE}: exit {} ({})",
            cross.code,
            cross.stderr.trim()
        )
    })?;
    Ok(format!(
        "{} concepts sat in {elapsed:?} (< {CORPUS_LIMIT:?}); --oracle {CORPUS_ORACLE} agrees",
        concepts.len()
    ))
}

fn mutation_m1() -> Outcome {
    let path = corpus_path("hb_mutated_m1.model");
    let run = restcheck(&["check", &path, "--format", "json"]);
    ensure(run.code == 1, || format!("exit {}, expected 1", run.code))?;
    let v = json(&run.stdout)?;
    let unsat: Vec<String> = v["concepts"]
        .as_array()
        .ok_or("no concepts array")?
        .iter()
        .filter(|c| c["status"] == "unsat")
        .map(|c| {
            format!(
                "{} {}",
                c["kind"].as_str().unwrap_or("?"),
                c["element"].as_str().unwrap_or("?")
            )
        })
        .collect();
    ensure(unsat == ["state processingPayment"], || {
        format!("unsatisfiable concepts: {unsat:?}")
    })?;
    let line = "error[UNSAT_STATE] state 'processingPayment' can never be active";
    ensure(run.stderr.contains(line), || {
        format!("stderr lacks '{line}'")
    })?;
    let text = restcheck(&["check", &path]);
    ensure(text.stdout.lines().any(|l| l == line), || {
        format!("text report lacks '{line}'")
    })?;

    let m = parse_model(&corpus("hb_mutated_m1.model"), "m1").map_err(|e| e.to_string())?;
    let t = translate_models(&m.resources, m.behavior.as_ref(), DEFAULT_BASE_IRI)
        .map_err(|e| e.to_string())?;
    match bounded_model_search(&t.ontology, "State_processingPayment", M1_BOUND) {
        Ok(OracleResult::NoModelUpToBound(k)) if k == M1_BOUND => {}
        other => return Err(format!("oracle returned {other:?}")),
    }
    Ok(format!(
        "only processingPayment UNSAT, exit 1; oracle: no model up to {M1_BOUND}"
    ))
}

fn golden_files() -> Outcome {
    let templates = [
        "SubClassOf(:Gadget :Product)",
        "DisjointClasses(:Catalog :Product)",
        "SubClassOf(:Product DataExactCardinality(1 :sku))",
        "SubClassOf(:Catalog ObjectMinCardinality(1 :products))",
        "SubClassOf(:Catalog ObjectMaxCardinality(3 :products))",
        "SubClassOf(:State_sparse :Catalog)",
        "EquivalentClasses(:State_sparse ObjectExactCardinality(1 :products))",
    ];
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (model, golden) in [
        ("snippet.model", "snippet.ofn"),
        ("hotel_booking.model", "hb.ofn"),
    ] {
        let out = dir.path().join(golden);
        let out = out.to_str().unwrap();
        let run = restcheck(&["translate", &corpus_path(model), "-o", out]);
        ensure(run.code == 0, || {
            format!(
                "translate {model}: exit {} ({})",
                run.code,
                run.stderr.trim()
            )
        })?;
        let produced = std::fs::read_to_string(out).map_err(|e| e.to_string())?;
        ensure(produced == corpus(golden), || {
            format!("{golden} differs from translate {model}")
        })?;
        let again = restcheck(&["translate", &corpus_path(model)]);
        ensure(again.stdout == produced, || {
            format!("translate {model} is not idempotent")
        })?;
    }
    let snippet = corpus("snippet.ofn");
    for line in templates {
        ensure(snippet.lines().any(|l| l == line), || {
            format!("snippet.ofn lacks '{line}'")
        })?;
    }
    Ok(format!(
        "hb.ofn and snippet.ofn byte-equal; {} template axioms present",
        templates.len()
    ))
}

fn reasoner_gate() -> Outcome {
    let n = ClassExpr::named;
    let sat = |axioms: Vec<Axiom>, class: &str| {
        let mut o = Ontology::new(DEFAULT_BASE_IRI);
        o.axioms = axioms;
        is_satisfiable(&compile_tbox(&o), class).status
    };
    let card = sat(
        vec![
            Axiom::SubClassOf(n("A"), ClassExpr::MinCardinality(2, "r".into())),
            Axiom::SubClassOf(n("A"), ClassExpr::MaxCardinality(1, "r".into())),
        ],
        "A",
    );
    ensure(card == SatStatus::Unsat, || {
        "≥2r ⊓ ≤1r is satisfiable".into()
    })?;
    let disjoint = sat(
        vec![
            Axiom::DeclareClass("S".into()),
            Axiom::DisjointClasses(vec![n("A"), n("B")]),
            Axiom::EquivalentClasses(n("S"), ClassExpr::IntersectionOf(vec![n("A"), n("B")])),
        ],
        "S",
    );
    ensure(disjoint == SatStatus::Unsat, || {
        "S ≡ A ⊓ B with A, B disjoint is satisfiable".into()
    })?;
    let lone = sat(vec![Axiom::DeclareClass("C".into())], "C");
    ensure(lone == SatStatus::Sat, || {
        "a lone class is unsatisfiable".into()
    })?;
    let start = Instant::now();
    let cycle = sat(
        vec![Axiom::SubClassOf(n("A"), ClassExpr::some("r", n("A")))],
        "A",
    );
    let elapsed = start.elapsed();
    ensure(cycle == SatStatus::Sat, || {
        "A ⊑ ∃r.A is unsatisfiable".into()
    })?;
    ensure(elapsed < CYCLE_LIMIT, || {
        format!("A ⊑ ∃r.A took {elapsed:?}")
    })?;
    let value =
        |v: &str| ClassExpr::DataHasValue("flag".into(), OwlLiteral::new(v, Datatype::Boolean));
    let functional = sat(
        vec![
            Axiom::SubClassOf(n("C"), ClassExpr::DataExactCardinality(1, "flag".into())),
            Axiom::SubClassOf(
                n("C"),
                ClassExpr::IntersectionOf(vec![value("true"), value("false")]),
            ),
        ],
        "C",
    );
    ensure(functional == SatStatus::Unsat, || {
        "functional property holds both true and false".into()
    })?;
    Ok(format!(
        "5 cases as expected; A ⊑ ∃r.A decided in {elapsed:?} (< {CYCLE_LIMIT:?})"
    ))
}

fn differential() -> Outcome {
    let start = Instant::now();
    let mut queries = 0;
    for seed in 0..DIFFERENTIAL_CASES {
        let (o, classes) = OntologyGen::generate(&mut support::rng(seed));
        let tbox = compile_tbox(&o);
        for c in &classes {
            let v = is_satisfiable(&tbox, c);
            let oracle =
                bounded_model_search(&o, c, DIFFERENTIAL_BOUND).map_err(|e| e.to_string())?;
            queries += 1;
            ensure((v.status == SatStatus::Sat) == oracle.is_sat(), || {
                format!(
                    "seed {seed}, class {c}: tableau {:?}, oracle sat={}",
                    v.status,
                    oracle.is_sat()
                )
            })?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < DIFFERENTIAL_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{DIFFERENTIAL_CASES} ontologies, {queries} queries, 100% agreement at bound {DIFFERENTIAL_BOUND} in {elapsed:?}"
    ))
}

fn structural_gate() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let defects = support::structural_defects();
    for (i, (what, text, code)) in defects.iter().enumerate() {
        let report = pipeline::validate(text, what);
        let codes: Vec<&str> = report.diagnostics.iter().map(|d| d.code.as_str()).collect();
        ensure(codes == [*code], || {
            format!("{what}: codes {codes:?}, expected [{code}]")
        })?;
        let path = dir.path().join(format!("defect{i}.model"));
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        for cmd in ["validate", "check"] {
            let run = restcheck(&[cmd, path.to_str().unwrap()]);
            ensure(run.code == 2, || format!("{what}: {cmd} exit {}", run.code))?;
            ensure(run.stdout.contains(&format!("error[{code}]")), || {
                format!("{what}: {cmd} output lacks {code}")
            })?;
        }
    }
    ensure(
        pipeline::validate(support::SHOP, "shop")
            .diagnostics
            .is_empty(),
        || "the unmodified model is invalid".into(),
    )?;
    Ok(format!(
        "{} defects, each exactly its code and exit 2",
        defects.len()
    ))
}

fn round_trips() -> Outcome {
    let (mut dsl, mut ofn, mut ocl) = (0, 0, 0);
    for name in MODELS {
        support::dsl_fixed_point(&corpus(name), name)?;
        dsl += 1;
        let m = parse_model(&corpus(name), name).map_err(|e| e.to_string())?;
        let t = translate_models(&m.resources, m.behavior.as_ref(), DEFAULT_BASE_IRI)
            .map_err(|e| e.to_string())?;
        support::ofn_fixed_point(&t.ontology, name)?;
        ofn += 1;
        for s in &m.behavior.as_ref().unwrap().states {
            if let Some(inv) = &s.invariant {
                support::ocl_fixed_point(inv, name)?;
                ocl += 1;
            }
        }
    }
    for seed in 0..ROUND_TRIP_GENERATED {
        let mut r = support::rng(seed);
        let rm = ModelGen::resource_model(&mut r);
        let bm = ModelGen::behavioral_model(&mut r, &rm);
        support::dsl_model_fixed_point(&rm, Some(&bm), &format!("model seed {seed}"))?;
        dsl += 1;
        let (o, _) = OntologyGen::generate(&mut support::rng(seed));
        support::ofn_fixed_point(&o, &format!("ontology seed {seed}"))?;
        ofn += 1;
    }
    for (seed, e) in support::generated_invariants(ROUND_TRIP_GENERATED as usize) {
        support::ocl_fixed_point(&e, &format!("invariant seed {seed}"))?;
        ocl += 1;
    }
    Ok(format!(
        "fixed points: {dsl} DSL models, {ofn} ontologies, {ocl} invariants"
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        ("corpus consistency", corpus_consistency),
        ("mutation M1", mutation_m1),
        ("translator golden files", golden_files),
        ("reasoner unit gate", reasoner_gate),
        ("differential suite", differential),
        ("structural validation gate", structural_gate),
        ("round-trip gates", round_trips),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
