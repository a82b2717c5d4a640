//! Call graph, statement-level def-use graph and forward slicing.

mod callgraph;
mod defuse;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use serde::Serialize;

use crate::error::Error;
use crate::frontend::{NodeRef, SourceCorpus, SymbolTable};

pub use callgraph::{build_call_graph, CallEdge, CallEdgeView, CallGraph};
pub use defuse::{build_def_use, def_at, DefKey, DefKind, DefUseGraph, EdgeKind, GraphNode};

/// Default interprocedural hop budget.
pub const DEFAULT_DEPTH: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    pub seed: DefKey,
    pub depth: u32,
    /// Reached statement anchors with the hops needed to reach them.
    pub reached: BTreeMap<NodeRef, u32>,
    pub depth_used: u32,
    parents: BTreeMap<GraphNode, (GraphNode, EdgeKind)>,
}

impl Slice {
    pub fn contains(&self, stmt: NodeRef) -> bool {
        self.reached.contains_key(&stmt)
    }

    pub fn statements(&self) -> BTreeSet<NodeRef> {
        self.reached.keys().copied().collect()
    }

    /// Edge kinds along the recorded path from the seed to `stmt`.
    pub fn path_to(&self, stmt: NodeRef) -> Vec<EdgeKind> {
        let mut out = Vec::new();
        let mut cur = GraphNode::Stmt(stmt);
        while let Some((prev, kind)) = self.parents.get(&cur) {
            out.push(*kind);
            cur = prev.clone();
        }
        out.reverse();
        out
    }

    pub fn path_summary(&self, stmt: NodeRef) -> String {
        self.path_to(stmt)
            .iter()
            .map(|k| k.as_str())
            .collect::<Vec<_>>()
            .join(" > ")
    }

    pub fn view(&self, corpus: &SourceCorpus, symbols: &SymbolTable) -> SliceView {
        SliceView {
            schema_version: "1",
            seed: self.seed.describe(corpus, symbols),
            depth: self.depth,
            depth_used: self.depth_used,
            reached: self
                .reached
                .iter()
                .map(|(s, hops)| {
                    let node = corpus.node(*s);
                    ReachedView {
                        file: corpus.display_path(s.file).to_string(),
                        line: node.location.line,
                        column: node.location.column,
                        hops: *hops,
                        text: first_line(&node.text),
                    }
                })
                .collect(),
        }
    }
}

fn first_line(text: &str) -> String {
    text.lines().next().unwrap_or_default().trim().to_string()
}

#[derive(Debug, Clone, Serialize)]
pub struct SliceView {
    pub schema_version: &'static str,
    pub seed: String,
    pub depth: u32,
    pub depth_used: u32,
    pub reached: Vec<ReachedView>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReachedView {
    pub file: String,
    pub line: u32,
    pub column: u32,
    pub hops: u32,
    pub text: String,
}

/// Statements data-dependent on `seed` within `depth` interprocedural hops.
/// Edges leaving the seed itself are free, so a literal passed as an
/// argument reaches the uses of the receiving parameter at depth 0.
pub fn forward_slice(graph: &DefUseGraph, seed: &DefKey, depth: u32) -> Result<Slice, Error> {
    if !graph.contains(seed) {
        return Err(Error::UnknownSeed(format!("{seed:?}")));
    }
    let start = GraphNode::Def(seed.clone());
    let mut dist: BTreeMap<GraphNode, u32> = BTreeMap::new();
    let mut parents = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(start.clone(), 0);
    heap.push(Reverse((0u32, start.clone())));
    while let Some(Reverse((d, n))) = heap.pop() {
        if dist.get(&n).is_some_and(|best| *best < d) {
            continue;
        }
        for (next, kind) in graph.successors(&n) {
            let step = if n == start { 0 } else { kind.cost() };
            let nd = d + step;
            if nd > depth {
                continue;
            }
            if dist.get(next).is_none_or(|best| nd < *best) {
                dist.insert(next.clone(), nd);
                parents.insert(next.clone(), (n.clone(), *kind));
                heap.push(Reverse((nd, next.clone())));
            }
        }
    }
    let reached: BTreeMap<NodeRef, u32> = dist
        .into_iter()
        .filter_map(|(n, d)| match n {
            GraphNode::Stmt(s) => Some((s, d)),
            GraphNode::Def(_) => None,
        })
        .collect();
    let depth_used = reached.values().copied().max().unwrap_or(0);
    Ok(Slice {
        seed: seed.clone(),
        depth,
        reached,
        depth_used,
        parents,
    })
}

/// Statements present in every slice.
pub fn intersect(slices: &[Slice]) -> BTreeSet<NodeRef> {
    let Some((first, rest)) = slices.split_first() else {
        return BTreeSet::new();
    };
    first
        .reached
        .keys()
        .filter(|s| rest.iter().all(|o| o.contains(**s)))
        .copied()
        .collect()
}
