mod common;

use std::collections::BTreeSet;

use cipscan_core::catalog::{builtin_catalog, patterns_with_arity, Cip};
use cipscan_core::constraint::{parse_constraint_expr, ConstraintRecord, SeedRef};
use cipscan_core::dataflow::{DefKey, DEFAULT_DEPTH};
use cipscan_core::detectors::{
    detect, orchestrate, resolve_seed, DetectOptions, Seed,
};
use cipscan_core::frontend::SourceCorpus;
use cipscan_core::matcher::match_all;
use cipscan_core::synthetic::{planted_corpus, repeated_check_corpus};
use cipscan_core::{Error, Program};
use common::{program, SMALL_FIXTURES};

fn seed_ref(text: &str) -> SeedRef {
    SeedRef::parse(text).unwrap()
}

fn constraint(id: &str, seeds: &[&str], pattern: &str) -> ConstraintRecord {
    ConstraintRecord {
        id: id.into(),
        system: "Test".into(),
        description: String::new(),
        simplified: "x > 0".into(),
        scenario: String::new(),
        seeds: seeds.iter().map(|s| seed_ref(s)).collect(),
        manual_pattern: Some(pattern.into()),
        expr: parse_constraint_expr("x > 0").unwrap(),
    }
}

fn age_seeds(p: &Program) -> Vec<Seed> {
    ["Patient.java:5:field:age", "operator:>", "diabetes/Type2DiabetesRisks.java:15:literal:45"]
        .iter()
        .map(|s| resolve_seed(p, &seed_ref(s)).unwrap())
        .collect()
}

#[test]
fn age_check_found_in_both_risk_checkers() {
    let p = program("risk_factors");
    let found = detect(&p, Cip::BinaryComparison.pattern(), &age_seeds(&p), DEFAULT_DEPTH).unwrap();
    let sites: Vec<(&str, &str)> = found
        .iter()
        .map(|c| (c.instance.path.as_str(), c.instance.statement_text.as_str()))
        .collect();
    assert_eq!(sites.len(), 2, "{sites:?}");
    assert!(sites[0].0.ends_with("diabetes/AgeFactor.java"));
    assert!(sites[1].0.ends_with("heart/AgeFactor.java"));
    assert!(sites.iter().all(|(_, t)| *t == "patient.getAge() > age"));
    assert!(found.iter().all(|c| c.confirmed && c.evidence.len() == 2));
}

#[test]
fn mirrored_operator_seed_still_matches() {
    let p = program("risk_factors");
    let mut seeds = age_seeds(&p);
    seeds[1] = Seed::Operator("<");
    assert_eq!(detect(&p, Cip::BinaryComparison.pattern(), &seeds, 3).unwrap().len(), 2);
    seeds[1] = Seed::Operator("=");
    assert!(detect(&p, Cip::BinaryComparison.pattern(), &seeds, 3).unwrap().is_empty());
}

#[test]
fn dirty_flag_detector_finds_every_check() {
    let p = program("jedit");
    let seeds = [Seed::Def(DefKey::Field("buffer.Buffer.dirty".into()))];
    let found = detect(&p, Cip::BooleanProperty.pattern(), &seeds, 3).unwrap();
    let files: BTreeSet<String> = found
        .iter()
        .map(|c| c.instance.path.rsplit('/').next().unwrap().to_string())
        .collect();
    let expected: BTreeSet<String> = ["BufferAutosaveRequest.java", "EditPane.java", "View.java"]
        .map(String::from)
        .into();
    assert_eq!(files, expected);
    assert_eq!(found.len(), 3);
}

#[test]
fn unused_field_yields_no_candidates() {
    let p = program("nocalls");
    let seeds = [Seed::Def(DefKey::Field("plain.Plain.unused".into()))];
    assert!(detect(&p, Cip::NullCheck.pattern(), &seeds, 3).unwrap().is_empty());
}

#[test]
fn wrong_seed_count_and_missing_detector_are_errors() {
    let p = program("nocalls");
    let seeds = [Seed::Def(DefKey::Field("plain.Plain.limit".into()))];
    let err = detect(&p, Cip::BinaryComparison.pattern(), &seeds, 3).unwrap_err();
    assert!(matches!(err, Error::ArityMismatch { expected: 3, got: 1, .. }));
    let err = detect(&p, Cip::Setter.pattern(), &seeds, 3).unwrap_err();
    assert!(matches!(err, Error::NoDetector(_)));
}

#[test]
fn detector_output_is_a_subset_of_syntax_matches() {
    for rel in SMALL_FIXTURES {
        let p = program(rel);
        let defs: Vec<DefKey> = p.defuse.defs().cloned().collect();
        for pattern in builtin_catalog().iter().filter(|c| c.has_detector()) {
            let all = match_all(&p.corpus, &[pattern], &p.symbols);
            let seed_sets: Vec<Vec<Seed>> = match pattern.detector_arity {
                1 => defs.iter().map(|d| vec![Seed::Def(d.clone())]).collect(),
                2 => defs
                    .iter()
                    .take(12)
                    .flat_map(|a| defs.iter().take(12).map(move |b| vec![Seed::Def(a.clone()), Seed::Def(b.clone())]))
                    .collect(),
                _ => defs
                    .iter()
                    .take(10)
                    .flat_map(|a| {
                        defs.iter().take(10).map(move |b| {
                            vec![Seed::Def(a.clone()), Seed::Operator(">"), Seed::Def(b.clone())]
                        })
                    })
                    .collect(),
            };
            for seeds in seed_sets {
                for c in detect(&p, pattern, &seeds, 3).unwrap() {
                    assert!(all.contains(&c.instance), "{rel}: {:?}", c.instance);
                }
            }
        }
    }
}

#[test]
fn fan_out_follows_manual_arity() {
    let p = program("jedit");
    let c = constraint("dirty", &["buffer/Buffer.java:4:field:dirty"], "null check");
    let report = orchestrate(&p, &c, Cip::NullCheck.pattern(), DetectOptions::default()).unwrap();
    assert_eq!(report.detectors.len(), 9);
    assert!(report.candidates.iter().any(|c| c.pattern == "boolean property"));
    assert!(report.candidates.iter().all(|c| c.constraint_id == "dirty"));
    let names: Vec<&str> = patterns_with_arity(3).iter().map(|p| p.name).collect();
    assert_eq!(names, vec!["binary comparison"]);
}

#[test]
fn orchestration_needs_seeds_and_a_detector() {
    let p = program("jedit");
    let c = constraint("none", &[], "boolean property");
    let err = orchestrate(&p, &c, Cip::BooleanProperty.pattern(), DetectOptions::default()).unwrap_err();
    assert!(matches!(err, Error::NoSeeds(_)));
    let c = constraint("odd", &["buffer/Buffer.java:4:field"], "setter");
    let err = orchestrate(&p, &c, Cip::Setter.pattern(), DetectOptions::default()).unwrap_err();
    assert!(matches!(err, Error::NoDetector(_)));
}

#[test]
fn bad_seed_reference_is_reported() {
    let p = program("jedit");
    let err = resolve_seed(&p, &seed_ref("buffer/Buffer.java:6:field")).unwrap_err();
    assert!(matches!(err, Error::InvalidSeed { .. }));
    let err = resolve_seed(&p, &seed_ref("Missing.java:4:field")).unwrap_err();
    assert!(matches!(err, Error::InvalidSeed { .. }));
}

fn synthetic(corpus: &cipscan_core::synthetic::PlantedCorpus) -> Program {
    Program::new(SourceCorpus::from_sources(corpus.sources.clone()))
}

#[test]
fn cap_samples_reproducibly() {
    let planted = repeated_check_corpus(30);
    let p = synthetic(&planted);
    let c = &planted.constraints[0];
    let opts = DetectOptions { sample_seed: 7, ..DetectOptions::default() };
    let a = orchestrate(&p, c, Cip::BooleanProperty.pattern(), opts).unwrap();
    assert_eq!(a.total, 30);
    assert!(a.truncated);
    assert_eq!(a.candidates.len(), 25);
    let b = orchestrate(&p, c, Cip::BooleanProperty.pattern(), opts).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let other = DetectOptions { sample_seed: 8, ..opts };
    let c2 = orchestrate(&p, c, Cip::BooleanProperty.pattern(), other).unwrap();
    assert_ne!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&c2).unwrap());
    let lines: Vec<u32> = a.candidates.iter().map(|c| c.instance.line).collect();
    assert!(lines.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn every_planted_statement_is_recovered() {
    let planted = planted_corpus(10, 5);
    let p = synthetic(&planted);
    assert!(p.corpus.parse_failures.is_empty());
    let mut missed = Vec::new();
    for (c, (id, file, line)) in planted.constraints.iter().zip(&planted.planted) {
        assert_eq!(&c.id, id);
        let manual = cipscan_core::catalog::pattern_by_name(c.manual_pattern.as_deref().unwrap()).unwrap();
        let report = orchestrate(&p, c, manual, DetectOptions::default()).unwrap();
        let hit = report
            .candidates
            .iter()
            .any(|k| &k.instance.path == file && k.instance.line == *line && k.pattern == manual.name);
        if !hit {
            missed.push(format!("{id} {file}:{line}"));
        }
    }
    assert!(missed.is_empty(), "missed: {missed:?}");
}
