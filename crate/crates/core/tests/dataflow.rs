mod common;

use std::collections::{BTreeMap, BTreeSet};

use cipscan_core::dataflow::{
    build_call_graph, build_def_use, forward_slice, intersect, DefKey, DefUseGraph, GraphNode,
};
use cipscan_core::frontend::{NodeKind, NodeRef, Resolution};
use cipscan_core::{Error, Program};
use common::{node_with_text, program, SMALL_FIXTURES};

fn method_id(p: &Program, qname: &str) -> cipscan_core::frontend::MethodId {
    p.symbols
        .all_methods()
        .iter()
        .find(|m| m.qname == qname)
        .unwrap_or_else(|| panic!("no method {qname}"))
        .id
}

fn stmt_lines(p: &Program, stmts: impl IntoIterator<Item = NodeRef>) -> BTreeSet<(String, u32)> {
    stmts
        .into_iter()
        .map(|s| {
            let path = p.corpus.display_path(s.file);
            let file = path.rsplit('/').next().unwrap().to_string();
            (file, p.corpus.node(s).location.line)
        })
        .collect()
}

/// Reachability by repeated relaxation over the flat edge list, with the
/// seed's own edges free.
fn naive_reach(graph: &DefUseGraph, seed: &DefKey, depth: u32) -> BTreeSet<NodeRef> {
    let edges: Vec<_> = graph.edges().collect();
    let start = GraphNode::Def(seed.clone());
    let mut best: BTreeMap<GraphNode, u32> = BTreeMap::new();
    best.insert(start.clone(), 0);
    loop {
        let mut changed = false;
        for (from, to, kind) in &edges {
            let Some(d) = best.get(*from).copied() else { continue };
            let cost = if **from == start { 0 } else { kind.cost() };
            let nd = d + cost;
            if nd <= depth && best.get(*to).is_none_or(|b| nd < *b) {
                best.insert((*to).clone(), nd);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    best.into_keys()
        .filter_map(|n| match n {
            GraphNode::Stmt(s) => Some(s),
            GraphNode::Def(_) => None,
        })
        .collect()
}

#[test]
fn abstract_call_reaches_visible_override() {
    let p = program("risk_factors");
    let caller = method_id(&p, "itrust.risk.RiskChecker.isAtRisk");
    let diabetes = method_id(&p, "itrust.risk.diabetes.Type2DiabetesRisks.getDiseaseRiskFactors");
    let heart = method_id(&p, "itrust.risk.heart.HeartDiseaseRisks.getDiseaseRiskFactors");
    assert!(p.calls.has_edge(caller, diabetes));
    assert!(p.calls.has_edge(caller, heart));
}

#[test]
fn corpus_without_calls_has_no_edges() {
    let p = program("nocalls");
    assert!(p.calls.edges.is_empty());
}

#[test]
fn interface_call_fans_out_to_each_implementor() {
    let p = program("dispatch");
    let caller = method_id(&p, "shapes.Shapes.large");
    let from_large: Vec<_> = p.calls.edges.iter().filter(|e| e.caller == Some(caller)).collect();
    let callees: BTreeSet<String> = from_large
        .iter()
        .map(|e| p.symbols.method(e.callee).qname.clone())
        .collect();
    let expected: BTreeSet<String> =
        ["shapes.Circle.area", "shapes.Square.area"].map(String::from).into();
    assert_eq!(callees, expected);
    assert!(from_large
        .iter()
        .all(|e| e.resolution == Resolution::HierarchyApproximate));
}

#[test]
fn every_call_edge_sits_on_a_method_call_node() {
    for rel in SMALL_FIXTURES {
        let p = program(rel);
        for e in &p.calls.edges {
            assert_eq!(p.corpus.node(e.site).kind, NodeKind::MethodCall, "{rel}");
        }
    }
}

#[test]
fn dirty_flag_reaches_every_getter_check() {
    let p = program("jedit");
    let slice = forward_slice(&p.defuse, &DefKey::Field("buffer.Buffer.dirty".into()), 3).unwrap();
    let lines = stmt_lines(&p, slice.statements());
    for site in [
        ("EditPane.java", 11),
        ("View.java", 12),
        ("BufferAutosaveRequest.java", 12),
    ] {
        assert!(lines.contains(&(site.0.to_string(), site.1)), "missing {site:?} in {lines:?}");
    }
    let anchor = slice
        .statements()
        .into_iter()
        .find(|s| p.corpus.display_path(s.file).ends_with("View.java"))
        .unwrap();
    assert_eq!(slice.path_summary(anchor), "getter-read");
}

#[test]
fn unused_field_reaches_nothing() {
    let p = program("nocalls");
    let slice = forward_slice(&p.defuse, &DefKey::Field("plain.Plain.unused".into()), 3).unwrap();
    assert!(slice.reached.is_empty());
    assert_eq!(slice.depth_used, 0);
}

#[test]
fn literal_argument_reaches_comparison_through_constructor() {
    let p = program("risk_factors");
    let slice = forward_slice(&p.defuse, &DefKey::Literal("45".into()), 2).unwrap();
    let hits: Vec<_> = slice
        .statements()
        .into_iter()
        .filter(|s| p.corpus.node(*s).text == "return patient.getAge() > age;")
        .collect();
    assert_eq!(hits.len(), 2, "both AgeFactor copies");
}

#[test]
fn unknown_seed_is_an_error() {
    let p = program("nocalls");
    let err = forward_slice(&p.defuse, &DefKey::Field("plain.Plain.missing".into()), 3).unwrap_err();
    assert!(matches!(err, Error::UnknownSeed(_)));
}

#[test]
fn operand_slices_intersect_at_the_guard() {
    let p = program("swarm");
    let field = forward_slice(
        &p.defuse,
        &DefKey::Field("spectrogram.SpectrogramSettings.spectrogramMaxFreq".into()),
        3,
    )
    .unwrap();
    let nyquist = DefKey::Method(method_id(&p, "spectrogram.Wave.getNyquist"));
    let method = forward_slice(&p.defuse, &nyquist, 3).unwrap();
    let common = intersect(&[field.clone(), method]);
    let guard = p.corpus.anchor(node_with_text(
        &p.corpus,
        NodeKind::BinaryExpr,
        "settings.spectrogramMaxFreq > wave.getNyquist()",
    ));
    assert!(common.contains(&guard));
    assert_eq!(intersect(std::slice::from_ref(&field)), field.statements());
}

#[test]
fn disjoint_slices_intersect_to_nothing() {
    let p = program("jedit");
    let a = forward_slice(&p.defuse, &DefKey::Field("buffer.View.closing".into()), 3).unwrap();
    let b = forward_slice(&p.defuse, &DefKey::Field("buffer.BufferAutosaveRequest.saved".into()), 3)
        .unwrap();
    assert!(!a.reached.is_empty() && !b.reached.is_empty());
    assert!(intersect(&[a, b]).is_empty());
    assert!(intersect(&[]).is_empty());
}

#[test]
fn slices_grow_with_depth() {
    for rel in SMALL_FIXTURES {
        let p = program(rel);
        for seed in p.defuse.defs() {
            let mut prev = BTreeSet::new();
            for depth in 0..=4 {
                let s = forward_slice(&p.defuse, seed, depth).unwrap();
                let cur = s.statements();
                assert!(prev.is_subset(&cur), "{rel} {seed:?} depth {depth}");
                assert!(s.depth_used <= depth);
                prev = cur;
            }
        }
    }
}

#[test]
fn slices_equal_naive_reachability() {
    for rel in SMALL_FIXTURES {
        let p = program(rel);
        for seed in p.defuse.defs() {
            for depth in [0, 1, 3] {
                let s = forward_slice(&p.defuse, seed, depth).unwrap();
                assert_eq!(s.statements(), naive_reach(&p.defuse, seed, depth), "{rel} {seed:?}");
            }
        }
    }
}

#[test]
fn seed_direct_uses_are_always_reached() {
    for rel in SMALL_FIXTURES {
        let p = program(rel);
        for seed in p.defuse.defs() {
            let s = forward_slice(&p.defuse, seed, 0).unwrap();
            for (to, _) in p.defuse.successors(&GraphNode::Def(seed.clone())) {
                if let GraphNode::Stmt(st) = to {
                    assert!(s.contains(*st));
                }
            }
        }
    }
}

#[test]
fn graphs_and_slices_are_deterministic() {
    for rel in SMALL_FIXTURES {
        let a = program(rel);
        let b = program(rel);
        let ea: Vec<_> = a.calls.edges.iter().map(|e| e.view(&a.corpus, &a.symbols)).collect();
        let eb: Vec<_> = b.calls.edges.iter().map(|e| e.view(&b.corpus, &b.symbols)).collect();
        assert_eq!(serde_json::to_string(&ea).unwrap(), serde_json::to_string(&eb).unwrap());
        let rebuilt = build_def_use(&a.corpus, &a.symbols, &build_call_graph(&a.corpus, &a.symbols));
        let ga: Vec<_> = a.defuse.edges().collect();
        let gb: Vec<_> = rebuilt.edges().collect();
        assert_eq!(ga, gb);
        for seed in a.defuse.defs().take(20) {
            let va = forward_slice(&a.defuse, seed, 3).unwrap().view(&a.corpus, &a.symbols);
            let vb = forward_slice(&b.defuse, seed, 3).unwrap().view(&b.corpus, &b.symbols);
            assert_eq!(serde_json::to_string(&va).unwrap(), serde_json::to_string(&vb).unwrap());
        }
    }
}
