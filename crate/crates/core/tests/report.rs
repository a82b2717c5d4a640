mod common;

use std::collections::BTreeMap;

use cipscan_core::catalog::Cip;
use cipscan_core::constraint::{load_constraints, ConstraintFormat};
use cipscan_core::matcher::match_all;
use cipscan_core::report::{pattern_distribution, type_distribution, Axis, DistributionTable};
use cipscan_core::trace::{assemble_trace, resolve_data_definitions, Provenance, TraceLink};
use common::{fixture, program};
use proptest::prelude::*;

fn check_totals(t: &DistributionTable) {
    for (i, row) in t.cells.iter().enumerate() {
        assert_eq!(row.iter().sum::<usize>(), t.row_totals[i]);
    }
    for j in 0..t.columns.len() {
        assert_eq!(t.cells.iter().map(|r| r[j]).sum::<usize>(), t.column_totals[j]);
    }
    assert_eq!(t.row_totals.iter().sum::<usize>(), t.total);
    assert_eq!(t.column_totals.iter().sum::<usize>(), t.total);
}

/// Counts read back out of the CSV rendering, keyed by (row, column).
fn csv_counts(t: &DistributionTable) -> BTreeMap<(String, String), usize> {
    let text = t.to_csv();
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().unwrap().iter().map(str::to_string).collect();
    let mut out = BTreeMap::new();
    for rec in r.records() {
        let rec = rec.unwrap();
        for (j, h) in header.iter().enumerate().skip(1) {
            out.insert((rec[0].to_string(), h.clone()), rec[j].parse().unwrap());
        }
    }
    out
}

fn json_counts(t: &DistributionTable) -> BTreeMap<(String, String), usize> {
    let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
    assert_eq!(v["schema_version"], "1");
    let rows = v["rows"].as_array().unwrap();
    let cols = v["columns"].as_array().unwrap();
    let mut out = BTreeMap::new();
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in cols.iter().enumerate() {
            let n = v["cells"][i][j].as_u64().unwrap() as usize;
            out.insert((r.as_str().unwrap().to_string(), c.as_str().unwrap().to_string()), n);
        }
        out.insert((r.as_str().unwrap().to_string(), "total".into()), v["row_totals"][i].as_u64().unwrap() as usize);
    }
    for (j, c) in cols.iter().enumerate() {
        out.insert(("total".into(), c.as_str().unwrap().to_string()), v["column_totals"][j].as_u64().unwrap() as usize);
    }
    out.insert(("total".into(), "total".into()), v["total"].as_u64().unwrap() as usize);
    out
}

fn links_for(rel: &str, system: &str) -> Vec<TraceLink> {
    let p = program(rel);
    match_all(&p.corpus, &cipscan_core::matcher::structural_patterns(), &p.symbols)
        .iter()
        .map(|i| {
            let (defs, _) = resolve_data_definitions(&p, i);
            assemble_trace("c", Some(system), i, defs, Provenance::Manual).unwrap()
        })
        .collect()
}

#[test]
fn single_pattern_single_system_is_one_cell() {
    let links: Vec<TraceLink> = links_for("jedit", "jEdit")
        .into_iter()
        .filter(|l| l.enforcing.pattern == Cip::BooleanProperty.name())
        .collect();
    let t = pattern_distribution(&links);
    assert_eq!(t.rows, ["boolean property"]);
    assert_eq!(t.columns, ["jEdit"]);
    assert_eq!(t.total, links.len());
    assert_eq!(t.cells, vec![vec![links.len()]]);
}

#[test]
fn empty_input_gives_zero_totals() {
    let t = pattern_distribution(&[]);
    assert!(t.rows.is_empty() && t.columns.is_empty());
    assert_eq!(t.total, 0);
    let t = type_distribution(&[]);
    assert_eq!(t.rows.len(), 4);
    assert!(t.columns.is_empty());
    assert_eq!(t.row_totals, [0, 0, 0, 0]);
    assert_eq!(t.total, 0);
}

#[test]
fn type_table_matches_hand_counts() {
    let loaded = load_constraints(&fixture("constraints/examples.json"), ConstraintFormat::Json).unwrap();
    let t = type_distribution(&loaded.records);
    assert_eq!(t.axis, Axis::ConstraintType);
    assert_eq!(t.rows.len(), 4);
    assert_eq!(t.columns, ["Ant", "HTTPC", "Joda", "Swarm"]);
    check_totals(&t);
    let expected = std::fs::read_to_string(fixture("constraints/expected-types.tsv")).unwrap();
    let mut hand: BTreeMap<(String, String), usize> = BTreeMap::new();
    for line in expected.lines() {
        let (id, ty) = line.split_once('\t').unwrap();
        let system = loaded.records.iter().find(|r| r.id == id).unwrap().system.clone();
        *hand.entry((ty.to_string(), system)).or_default() += 1;
    }
    for (i, row) in t.rows.iter().enumerate() {
        for (j, col) in t.columns.iter().enumerate() {
            let want = hand.get(&(row.clone(), col.clone())).copied().unwrap_or(0);
            assert_eq!(t.cells[i][j], want, "{row} / {col}");
        }
    }
}

#[test]
fn renderings_agree_on_fixture_links() {
    let mut links = links_for("risk_factors", "iTrust");
    links.extend(links_for("jedit", "jEdit"));
    links.extend(links_for("swarm", "Swarm"));
    links.extend(links_for("httpc", "HTTPC"));
    let t = pattern_distribution(&links);
    check_totals(&t);
    assert_eq!(t.total, links.len());
    assert_eq!(csv_counts(&t), json_counts(&t));
    let table = t.to_table(false);
    assert_eq!(table.lines().count(), t.rows.len() + 2);
    assert!(table.lines().last().unwrap().ends_with(&t.total.to_string()));
}

proptest! {
    #[test]
    fn totals_equal_cell_sums(picks in prop::collection::vec((0usize..6, 0usize..3), 0..60)) {
        let base = links_for("jedit", "x");
        let template = base[0].clone();
        let links: Vec<TraceLink> = picks
            .iter()
            .map(|(p, s)| {
                let mut l = template.clone();
                l.enforcing.pattern = Cip::ALL[*p].name().to_string();
                l.system = if *s == 0 { None } else { Some(format!("S{s}")) };
                l
            })
            .collect();
        let t = pattern_distribution(&links);
        check_totals(&t);
        prop_assert_eq!(t.total, picks.len());
        prop_assert_eq!(csv_counts(&t), json_counts(&t));
    }
}
