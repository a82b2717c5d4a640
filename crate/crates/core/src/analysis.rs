use std::path::Path;

use crate::dataflow::{build_call_graph, build_def_use, CallGraph, DefUseGraph};
use crate::error::Error;
use crate::frontend::{build_symbols, parse_corpus, SourceCorpus, SymbolTable};

/// A parsed corpus with its symbol table, call graph and def-use graph.
/// Immutable once built.
#[derive(Debug)]
pub struct Program {
    pub corpus: SourceCorpus,
    pub symbols: SymbolTable,
    pub calls: CallGraph,
    pub defuse: DefUseGraph,
}

impl Program {
    pub fn new(corpus: SourceCorpus) -> Program {
        let symbols = build_symbols(&corpus);
        let calls = build_call_graph(&corpus, &symbols);
        let defuse = build_def_use(&corpus, &symbols, &calls);
        Program {
            corpus,
            symbols,
            calls,
            defuse,
        }
    }

    pub fn load<P: AsRef<Path>>(paths: &[P]) -> Result<Program, Error> {
        Ok(Program::new(parse_corpus(paths)?))
    }
}
