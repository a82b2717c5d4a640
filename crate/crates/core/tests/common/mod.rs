#![allow(dead_code)]

use std::path::PathBuf;

use cipscan_core::frontend::{
    build_symbols, parse_corpus, NodeKind, NodeRef, SourceCorpus, SymbolTable,
};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn load(rel: &str) -> (SourceCorpus, SymbolTable) {
    let corpus = parse_corpus(&[fixture(rel)]).expect("fixture parses");
    let symbols = build_symbols(&corpus);
    (corpus, symbols)
}

pub fn from_source(src: &str) -> (SourceCorpus, SymbolTable) {
    let corpus = SourceCorpus::from_sources([("Snippet.java", src)]);
    assert!(corpus.parse_failures.is_empty(), "{:?}", corpus.parse_failures);
    let symbols = build_symbols(&corpus);
    (corpus, symbols)
}

/// First node of `kind` whose source text is exactly `text`.
pub fn node_with_text(corpus: &SourceCorpus, kind: NodeKind, text: &str) -> NodeRef {
    corpus
        .all_nodes()
        .find(|n| corpus.node(*n).kind == kind && corpus.node(*n).text == text)
        .unwrap_or_else(|| panic!("no {kind} node with text `{text}`"))
}

/// Rows of the catalog snippet manifest: (file, pattern, parts).
pub fn catalog_rows() -> Vec<(String, String, Vec<String>)> {
    let manifest = std::fs::read_to_string(fixture("catalog/expected.tsv")).unwrap();
    manifest
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let cols: Vec<&str> = l.split('\t').collect();
            let parts = cols[2].split(" | ").map(str::to_string).collect();
            (cols[0].to_string(), cols[1].to_string(), parts)
        })
        .collect()
}

pub fn program(rel: &str) -> cipscan_core::Program {
    cipscan_core::Program::load(&[fixture(rel)]).expect("fixture parses")
}

/// Fixture directories small enough for exhaustive oracle checks.
pub const SMALL_FIXTURES: [&str; 9] = [
    "risk_factors",
    "risk_factors_single",
    "option_chain",
    "jedit",
    "swarm",
    "library_iterator",
    "recursion",
    "dispatch",
    "nocalls",
];
