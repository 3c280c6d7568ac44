mod support;

use std::time::Instant;

use restcheck_core::owl::serialize;
use restcheck_core::reasoner::{
    bounded_model_search, compile_tbox, compile_tbox_with, is_satisfiable, CompileOptions,
    SatStatus,
};

const CASES: u64 = 600;
const BOUND: u32 = 4;
const MODEL_CASES: u64 = 120;

#[test]
fn tableau_agrees_with_bounded_oracle() {
    let start = Instant::now();
    let mut checked = 0;
    let mut unsat = 0;
    let mut disagreements = Vec::new();
    for seed in 0..CASES {
        let (o, classes) = support::OntologyGen::generate(&mut support::rng(seed));
        if std::env::var("TRACE_SEEDS").is_ok() {
            eprintln!("seed {seed}");
        }
        let tbox = compile_tbox(&o);
        let plain = compile_tbox_with(&o, CompileOptions { absorption: false });
        for c in &classes {
            let v = is_satisfiable(&tbox, c);
            let w = is_satisfiable(&plain, c);
            let oracle = bounded_model_search(&o, c, BOUND).unwrap();
            checked += 1;
            unsat += usize::from(v.status == SatStatus::Unsat);
            if v.status != w.status || (v.status == SatStatus::Sat) != oracle.is_sat() {
                disagreements.push(format!(
                    "seed {seed}, class {c}: tableau {:?}, unabsorbed {:?}, oracle sat={}\n{}",
                    v.status,
                    w.status,
                    oracle.is_sat(),
                    serialize(&o)
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    println!("{checked} queries ({unsat} unsatisfiable) over {CASES} ontologies in {elapsed:?}");
    assert!(
        disagreements.is_empty(),
        "{} disagreement(s):\n{}",
        disagreements.len(),
        disagreements.join("\n")
    );
}

#[test]
fn translated_models_agree_with_bounded_oracle() {
    use restcheck_core::owl::DEFAULT_BASE_IRI;
    use restcheck_core::translate::translate_models;

    let start = Instant::now();
    let (mut checked, mut unsat, mut inconclusive) = (0, 0, 0);
    let mut disagreements = Vec::new();
    for seed in 0..MODEL_CASES {
        let mut r = support::rng(30_000 + seed);
        let rm = support::ModelGen::resource_model(&mut r);
        let bm = support::ModelGen::behavioral_model(&mut r, &rm);
        let t = translate_models(&rm, Some(&bm), DEFAULT_BASE_IRI).unwrap();
        let tbox = compile_tbox(&t.ontology);
        for c in tbox.classes() {
            let v = is_satisfiable(&tbox, c);
            let oracle = bounded_model_search(&t.ontology, c, BOUND).unwrap();
            checked += 1;
            match (v.status, oracle.is_sat()) {
                (SatStatus::Unsat, false) => unsat += 1,
                (SatStatus::Sat, true) => {}
                // a model may need more elements than the bound allows
                (SatStatus::Sat, false) => inconclusive += 1,
                (SatStatus::Unsat, true) => disagreements.push(format!(
                    "model seed {seed}, class {c}\n{}",
                    serialize(&t.ontology)
                )),
            }
        }
    }
    println!(
        "{checked} queries ({unsat} unsatisfiable, {inconclusive} beyond bound {BOUND}) over {MODEL_CASES} models in {:?}",
        start.elapsed()
    );
    assert!(disagreements.is_empty(), "{}", disagreements.join("\n"));
}
