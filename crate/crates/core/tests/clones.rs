mod common;

use cipscan_core::catalog::Cip;
use cipscan_core::clones::{classify_clone, clone_summary, group, CloneType, Consistency};
use cipscan_core::constraint::{parse_constraint_expr, ConstraintRecord, SeedRef};
use cipscan_core::detectors::{orchestrate, DetectOptions};
use cipscan_core::matcher::{match_all, PatternInstance};
use cipscan_core::trace::{
    assemble_trace, links_from_report, resolve_data_definitions, Provenance, TraceLink,
};
use cipscan_core::Program;
use common::{program, SMALL_FIXTURES};
use proptest::prelude::*;

fn manual_link(p: &Program, id: &str, inst: &PatternInstance) -> TraceLink {
    let (defs, _) = resolve_data_definitions(p, inst);
    assemble_trace(id, None, inst, defs, Provenance::Manual).unwrap()
}

fn repeatable_links(p: &Program) -> Vec<TraceLink> {
    let cips = [Cip::BooleanProperty.pattern(), Cip::NullBooleanCheck.pattern()];
    match_all(&p.corpus, &cips, &p.symbols)
        .iter()
        .filter(|i| i.statement_text.contains("isRepeatable"))
        .map(|i| manual_link(p, "entity-repeatable", i))
        .collect()
}

#[test]
fn mixed_entity_checks_are_inconsistent_with_cross_pattern_pairs() {
    let p = program("httpc");
    let links = repeatable_links(&p);
    let by = |name: &str| links.iter().filter(|l| l.enforcing.pattern == name).count();
    assert_eq!(by("boolean property"), 4);
    assert_eq!(by("null-boolean check"), 3);
    let groups = group(&links);
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].consistency, Consistency::Inconsistent);
    let s = clone_summary(&groups);
    assert!(s.all_pairs.type4 >= 1);
    // 4 identical property reads and 3 identical null guards
    assert_eq!(s.all_pairs.type1, 6 + 3);
    assert_eq!(s.all_pairs.type4, 4 * 3);
    assert_eq!(s.anchor.type1 + s.anchor.type2 + s.anchor.type4 + s.anchor.not_clone, 6);
    assert_eq!(s.consistency.inconsistent, 1);
}

#[test]
fn identical_sites_tally_against_the_first() {
    let p = Program::new(cipscan_core::frontend::SourceCorpus::from_sources([(
        "flags/Switches.java",
        "package flags;\nclass Switches {\n  boolean on;\n  void a() { if (on) { } }\n  void b() { if (on) { } }\n  void c() { if (on) { } }\n}\n",
    )]));
    let links: Vec<TraceLink> = match_all(&p.corpus, &[Cip::BooleanProperty.pattern()], &p.symbols)
        .iter()
        .map(|i| manual_link(&p, "on", i))
        .collect();
    assert_eq!(links.len(), 3);
    let s = clone_summary(&group(&links));
    assert_eq!(s.anchor.type1, 2);
    assert_eq!(s.all_pairs.type1, 3);
    assert_eq!(s.consistency.consistent, 1);
    assert_eq!(s.pairs.iter().filter(|p| p.anchor).count(), 2);
}

#[test]
fn singleton_groups_produce_no_pairs() {
    let p = program("httpc");
    let links: Vec<TraceLink> = repeatable_links(&p)
        .into_iter()
        .enumerate()
        .map(|(i, mut l)| {
            l.constraint_id = format!("c{i}");
            l
        })
        .collect();
    let s = clone_summary(&group(&links));
    for t in CloneType::ALL {
        assert_eq!(s.anchor.get(t), 0);
        assert_eq!(s.all_pairs.get(t), 0);
    }
    assert!(s.pairs.is_empty());
    assert_eq!(s.consistency.singleton, links.len());
}

#[test]
fn detector_age_links_form_a_consistent_group() {
    let p = program("risk_factors");
    let c = ConstraintRecord {
        id: "age-over-45".into(),
        system: "iTrust".into(),
        description: String::new(),
        simplified: "patient age > 45".into(),
        scenario: String::new(),
        seeds: ["Patient.java:5:field:age", "operator:>", "diabetes/Type2DiabetesRisks.java:15:literal:45"]
            .iter()
            .map(|s| SeedRef::parse(s).unwrap())
            .collect(),
        manual_pattern: Some("binary comparison".into()),
        expr: parse_constraint_expr("patient age > 45").unwrap(),
    };
    let report = orchestrate(&p, &c, Cip::BinaryComparison.pattern(), DetectOptions::default()).unwrap();
    let (links, _) = links_from_report(&p, &report, Some("iTrust")).unwrap();
    let groups = group(&links);
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].consistency, Consistency::Consistent);
    let s = clone_summary(&groups);
    assert_eq!(s.all_pairs.type1 + s.all_pairs.type2, s.pairs.len());
    assert!(!s.pairs.is_empty());
}

#[test]
fn constructed_pairs_cover_each_type() {
    let bc = "binary comparison";
    assert_eq!(classify_clone("age > 45", bc, "age > 45", bc), CloneType::Type1);
    assert_eq!(classify_clone("age  >\n45", bc, "age > 45", bc), CloneType::Type1);
    assert_eq!(classify_clone("age > 45", bc, "years > 30", bc), CloneType::Type2);
    assert_eq!(
        classify_clone("d == Double.POSITIVE_INFINITY", bc, "Double.isInfinite(d)", "boolean property"),
        CloneType::Type4
    );
    assert_eq!(classify_clone("a > 1", bc, "a.size() < b", bc), CloneType::NotClone);
    // reusing one name where the other side uses two is not a renaming
    assert_eq!(classify_clone("a > a", bc, "a > b", bc), CloneType::NotClone);
}

#[test]
fn consistent_groups_never_hold_cross_pattern_pairs() {
    for rel in SMALL_FIXTURES.iter().chain(&["httpc", "definitions"]) {
        let p = program(rel);
        let insts = match_all(&p.corpus, &cipscan_core::matcher::structural_patterns(), &p.symbols);
        // one constraint per statement text so similar checks end up together
        let links: Vec<TraceLink> = insts
            .iter()
            .map(|i| {
                let id = i.binding.data_parts().next().map_or(String::new(), |d| d.text.clone());
                manual_link(&p, &id, i)
            })
            .collect();
        let groups = group(&links);
        let s = clone_summary(&groups);
        for pair in &s.pairs {
            let g = groups.iter().find(|g| g.constraint_id == pair.constraint_id).unwrap();
            if g.consistency == Consistency::Consistent {
                assert_ne!(pair.clone_type, CloneType::Type4, "{rel}: {pair:?}");
            }
        }
        let n: usize = groups.iter().map(|g| g.links.len() * (g.links.len() - 1) / 2).sum();
        assert_eq!(s.pairs.len(), n);
    }
}

fn statement() -> impl Strategy<Value = String> {
    let atom = prop_oneof![
        "[a-z]{1,3}".prop_map(|s| s),
        (0u32..100).prop_map(|n| n.to_string()),
        Just("null".to_string()),
        Just("\"x\"".to_string()),
    ];
    let op = prop_oneof![Just(">"), Just("=="), Just("!="), Just("&&"), Just(".")];
    (atom.clone(), op, atom).prop_map(|(a, o, b)| format!("{a} {o} {b}"))
}

proptest! {
    #[test]
    fn classification_is_symmetric(
        a in statement(),
        b in statement(),
        pa in prop_oneof![Just("binary comparison"), Just("null check")],
        pb in prop_oneof![Just("binary comparison"), Just("null check")],
    ) {
        prop_assert_eq!(classify_clone(&a, pa, &b, pb), classify_clone(&b, pb, &a, pa));
    }

    #[test]
    fn a_statement_is_its_own_type1_clone(a in statement()) {
        prop_assert_eq!(classify_clone(&a, "x", &a, "y"), CloneType::Type1);
    }
}
