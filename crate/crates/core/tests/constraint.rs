mod common;

use cipscan_core::constraint::{
    classify, load_constraints, parse_constraint_expr, parse_constraints, Attribute, CmpOp,
    ConstraintExpr, ConstraintFormat, ConstraintType, Operand,
};
use cipscan_core::Error;
use common::fixture;
use proptest::prelude::*;

#[test]
fn example_constraints_classify_to_their_types() {
    let loaded = load_constraints(&fixture("constraints/examples.json"), ConstraintFormat::Json).unwrap();
    assert!(loaded.diagnostics.is_empty(), "{:?}", loaded.diagnostics);
    let expected = std::fs::read_to_string(fixture("constraints/expected-types.tsv")).unwrap();
    let expected: Vec<(&str, &str)> = expected
        .lines()
        .map(|l| l.split_once('\t').unwrap())
        .collect();
    let got: Vec<(String, String)> = loaded
        .records
        .iter()
        .map(|r| (r.id.clone(), r.constraint_type().to_string()))
        .collect();
    assert_eq!(got.len(), 8);
    for ((id, t), (gid, gt)) in expected.iter().zip(&got) {
        assert_eq!((*id, *t), (gid.as_str(), gt.as_str()));
    }
}

#[test]
fn grammar_examples() {
    assert_eq!(
        parse_constraint_expr("onMissingExtensionPoint in {fail, warn, ignore}").unwrap(),
        ConstraintExpr::Membership {
            attribute: Attribute::new("onMissingExtensionPoint"),
            labels: vec!["fail".into(), "warn".into(), "ignore".into()],
        }
    );
    assert_eq!(
        parse_constraint_expr("switch date is 1582-10-15").unwrap(),
        ConstraintExpr::Assignment {
            attribute: Attribute::new("switch date"),
            value: "1582-10-15".into(),
        }
    );
    assert_eq!(
        parse_constraint_expr("max frequency > min frequency").unwrap(),
        ConstraintExpr::Comparison {
            attribute: Attribute::new("max frequency"),
            op: CmpOp::Gt,
            operand: Operand::Attribute(Attribute::new("min frequency")),
        }
    );
}

#[test]
fn empty_file_loads_nothing() {
    for format in [ConstraintFormat::Json, ConstraintFormat::Csv] {
        let loaded = parse_constraints("empty", "", format).unwrap();
        assert!(loaded.records.is_empty() && loaded.diagnostics.is_empty());
    }
}

#[test]
fn swarm_row_keeps_its_parsed_expression() {
    let loaded = load_constraints(&fixture("constraints/examples.json"), ConstraintFormat::Json).unwrap();
    let r = &loaded.records[0];
    assert!(r.description.starts_with("The maximum spectrogram frequency"));
    assert_eq!(r.expr.to_string(), "max frequency > 0");
}

#[test]
fn bad_csv_rows_are_skipped_with_diagnostics() {
    let loaded = load_constraints(&fixture("constraints/mixed.csv"), ConstraintFormat::Csv).unwrap();
    let ids: Vec<&str> = loaded.records.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids, vec!["r1", "r5"]);
    assert_eq!(loaded.diagnostics.len(), 3);
    assert!(loaded.diagnostics[0].message.contains("no simplified expression"));
    assert_eq!(loaded.records[0].seeds[0].symbol.as_deref(), Some("dirty"));
    assert_eq!(loaded.records[0].manual_pattern.as_deref(), Some("boolean property"));
    assert!(loaded.records[1].seeds[1].is_operator());
}

#[test]
fn duplicate_id_is_fatal() {
    let text = r#"[{"id":"a","simplified":"x > 1"},{"id":"a","simplified":"y > 1"}]"#;
    let err = parse_constraints("dup.json", text, ConstraintFormat::Json).unwrap_err();
    assert!(matches!(err, Error::DuplicateConstraint(id) if id == "a"));
}

#[test]
fn malformed_json_record_is_skipped() {
    let text = r#"[{"simplified":"x > 1"},{"id":"b","simplified":"y > 1"}]"#;
    let loaded = parse_constraints("p.json", text, ConstraintFormat::Json).unwrap();
    assert_eq!(loaded.records.len(), 1);
    assert_eq!(loaded.diagnostics.len(), 1);
}

fn attribute() -> impl Strategy<Value = String> {
    prop::collection::vec("[a-zA-Z][a-zA-Z0-9_]{0,6}", 1..3).prop_map(|w| w.join(" "))
}

fn operand() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("true".to_string()),
        Just("false".to_string()),
        Just("null".to_string()),
        Just("not-null".to_string()),
        (0i64..10_000).prop_map(|n| n.to_string()),
        attribute(),
        "\"[a-z]{1,5}\"",
    ]
}

fn operator() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec![">", ">=", "<", "<=", "==", "!=", "=", "≥", "≤", "≠"])
}

fn is_two_valued(t: &str) -> bool {
    matches!(t, "true" | "false" | "null" | "not-null")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn equality_over_two_values_is_dual_value(a in attribute(), op in operator(), rhs in operand()) {
        let text = format!("{a} {op} {rhs}");
        let expr = parse_constraint_expr(&text).unwrap();
        let t = classify(&expr);
        prop_assert_eq!(t, classify(&expr));
        let equality = matches!(op, "==" | "!=" | "=" | "≠");
        let dual = t == ConstraintType::DualValueComparison;
        prop_assert_eq!(dual, equality && is_two_valued(&rhs), "{}", text);
        if dual {
            let swapped = format!("{a} > {rhs}");
            if let Ok(e) = parse_constraint_expr(&swapped) {
                prop_assert_eq!(classify(&e), ConstraintType::ValueComparison);
            }
        }
    }

    #[test]
    fn classification_is_total(text in "[a-z ]{1,8}( (==|>|is|in) [a-z0-9{}, ]{1,10})?") {
        if let Ok(expr) = parse_constraint_expr(&text) {
            prop_assert!(ConstraintType::ALL.contains(&classify(&expr)));
        }
    }
}
