mod common;

use cipscan_core::catalog::Cip;
use cipscan_core::constraint::SeedRef;
use cipscan_core::detectors::{orchestrate, DetectOptions};
use cipscan_core::frontend::{NodeKind, NodeRef};
use cipscan_core::matcher::{match_all, structural_patterns, PatternInstance};
use cipscan_core::trace::{
    assemble_trace, descend_enforcing, links_from_report, parse_links, resolve_data_definitions,
    DefinitionKind, LinksFile, Predicate, Provenance,
};
use cipscan_core::{Error, Program};
use common::{node_with_text, program, SMALL_FIXTURES};

fn stmt(p: &Program, kind: NodeKind, text: &str) -> NodeRef {
    p.corpus.anchor(node_with_text(&p.corpus, kind, text))
}

fn line_of(p: &Program, n: NodeRef) -> u32 {
    p.corpus.node(n).location.line
}

fn plain(p: &Program, cip: Cip) -> Predicate {
    Predicate::new(p, cip.pattern(), &[], 3).unwrap()
}

fn instance_with_text(p: &Program, cip: Cip, text: &str) -> PatternInstance {
    match_all(&p.corpus, &[cip.pattern()], &p.symbols)
        .into_iter()
        .find(|i| i.statement_text == text)
        .unwrap_or_else(|| panic!("no {cip} instance `{text}`"))
}

#[test]
fn descent_leaves_the_settings_call_for_the_guard() {
    let p = program("swarm");
    let call = stmt(&p, NodeKind::MethodCall, "processSettings()");
    let seeds: Vec<SeedRef> = [
        "SpectrogramSettings.java:4:field",
        "operator:>",
        "Wave.java:10:method:getNyquist",
    ]
    .iter()
    .map(|s| SeedRef::parse(s).unwrap())
    .collect();
    let seeded = Predicate::from_refs(&p, Cip::BinaryComparison.pattern(), &seeds, 3).unwrap();
    let guard = stmt(&p, NodeKind::BinaryExpr, "settings.spectrogramMaxFreq > wave.getNyquist()");
    assert_eq!(descend_enforcing(&p, call, &seeded), guard);
    assert_eq!(descend_enforcing(&p, call, &plain(&p, Cip::BinaryComparison)), guard);
}

#[test]
fn statement_without_calls_is_its_own_result() {
    let p = program("nocalls");
    let s = stmt(&p, NodeKind::BinaryExpr, "x > 0");
    assert_eq!(descend_enforcing(&p, s, &plain(&p, Cip::BinaryComparison)), s);
}

#[test]
fn library_call_stops_descent() {
    let p = program("library_iterator");
    let s = stmt(&p, NodeKind::LocalVarDecl, "E minSoFar = iterator.next();");
    assert_eq!(descend_enforcing(&p, s, &plain(&p, Cip::BinaryComparison)), s);
}

#[test]
fn mutual_recursion_terminates_at_first_discovered_statement() {
    let p = program("recursion");
    let pred = plain(&p, Cip::BinaryComparison);
    let start = stmt(&p, NodeKind::MethodCall, "ping(x)");
    let ping = stmt(&p, NodeKind::BinaryExpr, "x > LIMIT");
    let pong = stmt(&p, NodeKind::BinaryExpr, "x < LIMIT");
    assert_eq!(line_of(&p, start), 7);
    let found = descend_enforcing(&p, start, &pred);
    assert_eq!(line_of(&p, found), 11);
    assert_eq!(found, ping);
    assert_eq!(descend_enforcing(&p, pong, &pred), ping);
    assert_eq!(descend_enforcing(&p, ping, &pred), ping);
}

#[test]
fn descent_is_idempotent_on_fixtures() {
    for rel in SMALL_FIXTURES {
        let p = program(rel);
        for cip in [Cip::BinaryComparison, Cip::BooleanProperty, Cip::NullCheck] {
            let pred = plain(&p, cip);
            for s in p.corpus.all_nodes().filter(|n| p.corpus.node(*n).is_stmt()) {
                let once = descend_enforcing(&p, s, &pred);
                assert_eq!(descend_enforcing(&p, once, &pred), once, "{rel} {cip}");
            }
        }
    }
}

fn defs_of(p: &Program, cip: Cip, text: &str) -> Vec<(DefinitionKind, String)> {
    let inst = instance_with_text(p, cip, text);
    let (defs, diags) = resolve_data_definitions(p, &inst);
    assert!(diags.is_empty(), "{diags:?}");
    defs.into_iter().map(|d| (d.kind, d.symbol)).collect()
}

#[test]
fn operand_sources_map_to_definition_kinds() {
    use DefinitionKind::*;
    let p = program("definitions");
    assert_eq!(
        defs_of(&p, Cip::BinaryComparison, "obj.getCount() > 3"),
        vec![(FieldDeclaration, "defs.Checks.count".into()), (LiteralOccurrence, "3".into())]
    );
    assert_eq!(
        defs_of(&p, Cip::BinaryComparison, "obj.calculateValue() > 3")[0],
        (MethodDeclaration, "defs.Checks.calculateValue".into())
    );
    assert_eq!(
        defs_of(&p, Cip::BinaryComparison, "count > value")[1],
        (LocalAssignment, "value".into())
    );
    assert_eq!(
        defs_of(&p, Cip::NullCheck, "request.get(\"key\") != null"),
        vec![(LibraryCallSite, "request.get(\"key\")".into())]
    );
    assert_eq!(
        defs_of(&p, Cip::BinaryComparison, "count < limit")[1],
        (ParameterDefinition, "limit".into())
    );
}

#[test]
fn age_check_link_uses_getter_field_and_constructor_literal() {
    let p = program("risk_factors");
    let inst = match_all(&p.corpus, &[Cip::BinaryComparison.pattern()], &p.symbols)
        .into_iter()
        .find(|i| i.path.ends_with("diabetes/AgeFactor.java"))
        .unwrap();
    let (defs, _) = resolve_data_definitions(&p, &inst);
    assert_eq!(defs[0].kind, DefinitionKind::FieldDeclaration);
    assert_eq!(defs[0].symbol, "itrust.risk.Patient.age");
    assert_eq!(defs[1].kind, DefinitionKind::LiteralOccurrence);
    assert_eq!(defs[1].symbol, "45");
    assert!(defs[1].file.ends_with("Type2DiabetesRisks.java"));
    assert_eq!(defs[1].line, 15);
    let link = assemble_trace("age-over-45", Some("iTrust"), &inst, defs.clone(), Provenance::Manual).unwrap();
    assert_eq!(link.enforcing.pattern, "binary comparison");
    assert_eq!(link.definitions.len(), 2);
    let err = assemble_trace("x", None, &inst, defs[..1].to_vec(), Provenance::Manual).unwrap_err();
    assert!(matches!(err, Error::DefinitionCount { expected: 2, got: 1, .. }));
    let shared = assemble_trace("age-over-30", None, &inst, defs, Provenance::Manual).unwrap();
    assert_eq!(shared.location(), link.location());
}

#[test]
fn definition_kinds_match_their_nodes() {
    for rel in SMALL_FIXTURES.iter().chain(&["definitions"]) {
        let p = program(rel);
        for inst in match_all(&p.corpus, &structural_patterns(), &p.symbols) {
            let (defs, _) = resolve_data_definitions(&p, &inst);
            assert_eq!(defs.len(), inst.pattern.pattern().data_part_count());
            for d in defs.iter().filter(|d| !d.unresolved) {
                let Some(n) = d.node else { continue };
                let kind = p.corpus.node(n).kind;
                assert!(d.kind.node_kinds().contains(&kind), "{rel}: {d:?} on {kind}");
            }
        }
    }
}

#[test]
fn detector_links_round_trip() {
    let p = program("jedit");
    let c = cipscan_core::constraint::ConstraintRecord {
        id: "dirty".into(),
        system: "jEdit".into(),
        description: String::new(),
        simplified: "buffer dirty == false".into(),
        scenario: String::new(),
        seeds: vec![SeedRef::parse("buffer/Buffer.java:4:field:dirty").unwrap()],
        manual_pattern: Some("boolean property".into()),
        expr: cipscan_core::constraint::parse_constraint_expr("buffer dirty == false").unwrap(),
    };
    let report = orchestrate(&p, &c, Cip::BooleanProperty.pattern(), DetectOptions::default()).unwrap();
    let (links, _) = links_from_report(&p, &report, Some("jEdit")).unwrap();
    assert!(!links.is_empty());
    assert!(links.iter().all(|l| l.provenance == Provenance::Detector));
    for (link, cand) in links.iter().zip(&report.candidates) {
        let (again, _) = resolve_data_definitions(&p, &cand.instance);
        assert_eq!(again, link.definitions);
    }
    let json = serde_json::to_string(&LinksFile::new(links.clone())).unwrap();
    let back = parse_links("links.json", &json).unwrap();
    assert_eq!(back.len(), links.len());
    assert_eq!(back[0].enforcing, links[0].enforcing);
    assert_eq!(back[0].definitions[0].symbol, links[0].definitions[0].symbol);
}
